#pragma once

#include <cstdio>
#include <optional>
#include <string>

#include "json.hpp"
#include "rovella/norms/grid.hpp"

namespace rovella {

/// Collection of norms of one observable. Absent entries were not computed.
struct NormReport {
  struct Param1 {
    double param;
    double value;
  };
  struct Param2 {
    double p;
    double r;
    double value;
  };
  std::optional<double> sup;
  std::optional<Param1> holder;  // alpha
  std::optional<double> lip_y;
  std::optional<Param1> var_p;  // p
  std::optional<Param2> var_pr;
  std::optional<double> var_square;
};

struct NormRequest {
  double alpha = 0.5;
  double p = 2.0;
  double r = 0.5;
};

/// Interval observables get sup, Holder, Var_p and Var_{p,r};
/// square observables get sup, Lip_y and Var^square.
inline NormReport compute_norm_report(const GridObservable& f, const NormRequest& req = {}) {
  NormReport rep;
  rep.sup = sup_norm(f);
  if (f.is_square()) {
    rep.lip_y = lip_y(f);
    rep.var_square = var_square(f);
  } else {
    rep.holder = NormReport::Param1{req.alpha, holder_seminorm(f, req.alpha)};
    rep.var_p = NormReport::Param1{req.p, universal_var_p(f, req.p)};
    rep.var_pr = NormReport::Param2{req.p, req.r, var_pr_norm(f, req.p, req.r).seminorm};
  }
  return rep;
}

namespace detail {
inline std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}
}  // namespace detail

/// Flat key-value object, e.g. {"sup":..., "holder_0.5":..., "var_pr_2_0.5":...}.
inline nlohmann::json to_json(const NormReport& r) {
  nlohmann::json j = nlohmann::json::object();
  if (r.sup) j["sup"] = *r.sup;
  if (r.holder) j["holder_" + detail::short_number(r.holder->param)] = r.holder->value;
  if (r.var_p) j["var_p_" + detail::short_number(r.var_p->param)] = r.var_p->value;
  if (r.var_pr) j["var_pr_" + detail::short_number(r.var_pr->p) + "_" + detail::short_number(r.var_pr->r)] = r.var_pr->value;
  if (r.var_square) j["var_square"] = *r.var_square;
  if (r.lip_y) j["lip_y"] = *r.lip_y;
  return j;
}

}  // namespace rovella
