#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "json.hpp"

#include "cmvsub/arcs.hpp"
#include "cmvsub/gordon.hpp"
#include "cmvsub/matrix.hpp"
#include "cmvsub/rotation.hpp"
#include "cmvsub/spectrum.hpp"
#include "cmvsub/tracemap.hpp"
#include "cmvsub/transfer.hpp"

namespace cmvsub::io {

using nlohmann::json;

inline constexpr const char* kSchema = "v1";

// Shortest text that reads back to the same double.
inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline json to_json(const ContinuedFraction& cf) {
  return json{{"a", cf.a}, {"p", cf.p}, {"q", cf.q}};
}

// Row-major [[re, im], ...].
template <class T>
json to_json(const Mat2<T>& m) {
  json out = json::array();
  for (const auto& e : {m.m00, m.m01, m.m10, m.m11})
    out.push_back({static_cast<double>(e.real()), static_cast<double>(e.imag())});
  return out;
}

inline json to_json(const ArcSet<double>& arcs) {
  json list = json::array();
  for (const auto& a : arcs.arcs()) list.push_back({{"lo", a.lo}, {"hi", a.hi}});
  return json{{"arcs", list}, {"measure", arcs.measure()}};
}

inline json to_json(const ArcSet<Real>& arcs) {
  json list = json::array();
  for (const auto& a : arcs.arcs()) list.push_back({{"lo", a.lo.to_double()}, {"hi", a.hi.to_double()}});
  return list;
}

inline json to_json(const GordonReport& r) {
  return json{{"schema", kSchema},
              {"n", r.n},
              {"q_n", r.q_n},
              {"q_n1", r.q_n1},
              {"p_n", r.p_n},
              {"r", r.r.to_double()},
              {"r_exact", r.r.is_exact() ? json(r.r.to_string()) : json(nullptr)},
              {"arcs", to_json(r.arcs)},
              {"measure", r.measure.to_double()},
              {"bound", r.bound.to_double()},
              {"bound_kind", to_string(r.bound_kind)},
              {"bound_vacuous", r.bound_vacuous},
              {"measure_meets_bound", r.measure_meets_bound()},
              {"applicable", r.applicable}};
}

inline json to_json(const StabilityVerdict& v, double B) {
  json out{{"schema", kSchema},
           {"verdict", v.unstable() ? "unstable" : "not-decided"},
           {"B", B},
           {"levels_checked", v.levels_checked}};
  if (v.first_escape_level) {
    out["escape_level"] = *v.first_escape_level;
    out["region_sign"] = v.region_sign > 0 ? "+" : "-";
  } else {
    out["escape_level"] = nullptr;
    out["region_sign"] = nullptr;
  }
  return out;
}

inline json to_json(const SpectrumScan& s) {
  json out = to_json(s.arcs);
  out["schema"] = kSchema;
  out["resolution"] = s.resolution;
  out["sample_count"] = s.sample_count;
  out["zero_crossings"] = s.zero_crossings;
  out["plus_crossings"] = s.plus_crossings;
  out["minus_crossings"] = s.minus_crossings;
  out["converged"] = s.converged;
  out["max_imag_residual"] = s.max_imag_residual;
  return out;
}

// CSV writers. Headers are fixed; see README.

template <class T>
void write_propagation_csv(std::ostream& os, const SolutionPair<T>& s) {
  os << "n,re_u,im_u,re_v,im_v,norm\n";
  for (long n = s.first; n <= s.last(); ++n) {
    auto psi = s.at(n);
    os << n << ',' << fmt(static_cast<double>(psi[0].real())) << ',' << fmt(static_cast<double>(psi[0].imag()))
       << ',' << fmt(static_cast<double>(psi[1].real())) << ',' << fmt(static_cast<double>(psi[1].imag())) << ','
       << fmt(static_cast<double>(s.norm(n))) << '\n';
  }
}

inline void write_orbit_csv(std::ostream& os, const TraceOrbit& o) {
  os << "level,x,y,B,x_exceeds_B\n";
  for (int n = 1; n <= o.levels(); ++n)
    os << n << ',' << fmt(o.x_at(n)) << ',' << fmt(o.y_at(n)) << ',' << fmt(o.B) << ','
       << (std::abs(o.x_at(n)) > o.B ? 1 : 0) << '\n';
}

inline void write_discriminant_csv(std::ostream& os, const std::vector<DiscriminantSample>& samples) {
  os << "angle,re_delta,im_delta,in_band\n";
  for (const auto& s : samples)
    os << fmt(s.angle) << ',' << fmt(static_cast<double>(s.value.real())) << ','
       << fmt(static_cast<double>(s.value.imag())) << ',' << (std::fabs(s.value.real()) <= 2.0L ? 1 : 0) << '\n';
}

inline void write_gordon_summary_csv_header(std::ostream& os) {
  os << "n,q_n,q_n1,r,measure,bound,bound_kind,applicable\n";
}

inline void write_gordon_summary_csv_row(std::ostream& os, const GordonReport& r) {
  os << r.n << ',' << r.q_n << ',' << r.q_n1 << ',' << fmt(r.r.to_double()) << ',' << fmt(r.measure.to_double())
     << ',' << fmt(r.bound.to_double()) << ',' << to_string(r.bound_kind) << ',' << (r.applicable ? 1 : 0) << '\n';
}

}  // namespace cmvsub::io
