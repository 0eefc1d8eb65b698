// Copyright 2026 The bosonic-clt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// JSON and CSV serialization of experiment reports. Floats are written with
// 17 significant digits; wall-clock times are left out so identical runs give
// identical bytes.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"

#include "bosonic_clt/analysis.hpp"
#include "bosonic_clt/gaussification.hpp"

namespace bclt {

using Json = nlohmann::json;

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

inline void emit_json(const Json& j, std::ostream& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float:
      out << format_double(j.get<double>());
      return;
    case Json::value_t::array: {
      if (j.empty()) {
        out << "[]";
        return;
      }
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out << '[';
      bool first = true;
      for (const auto& e : j) {
        out << (first ? "" : ",");
        if (flat) {
          out << (first ? "" : " ");
        } else {
          out << '\n' << pad;
        }
        emit_json(e, out, indent, depth + 1);
        first = false;
      }
      if (!flat) out << '\n' << close_pad;
      out << ']';
      return;
    }
    case Json::value_t::object: {
      if (j.empty()) {
        out << "{}";
        return;
      }
      out << '{';
      bool first = true;
      for (const auto& item : j.items()) {
        out << (first ? "\n" : ",\n") << pad << Json(item.key()).dump() << ": ";
        emit_json(item.value(), out, indent, depth + 1);
        first = false;
      }
      out << '\n' << close_pad << '}';
      return;
    }
    default:
      out << j.dump();
  }
}

}  // namespace detail

/// Pretty-printed JSON with 17-significant-digit floats and a trailing newline.
inline std::string dump_json(const Json& j, int indent = 2) {
  std::ostringstream out;
  detail::emit_json(j, out, indent, 0);
  out << '\n';
  return out.str();
}

inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const Mat2& m) {
  return Json::array({Json::array({m(0, 0), m(0, 1)}), Json::array({m(1, 0), m(1, 1)})});
}

inline Json to_json(const Vec2& v) { return Json::array({v(0), v(1)}); }

template <class T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

inline Json to_json(const MomentData& m) {
  return {{"t", to_json(m.t)}, {"s", to_json(m.s)},   {"g", to_json(m.g)},
          {"h", m.h},          {"v", to_json(m.v)},   {"mean_defect", to_json(m.mean_defect)}};
}

inline Json to_json(const GaussianChannelParams& p) {
  Json j = {{"X", to_json(p.x)}, {"Y", to_json(p.y)}, {"centered_defect", p.centered_defect}};
  if (!p.warning.empty()) j["warning"] = p.warning;
  return j;
}

inline Json to_json(const Certificate& c) { return {{"min_eigenvalue", c.min_eigenvalue}, {"physical", c.physical}}; }

inline Json to_json(const GaussianState& g) { return {{"mean", to_json(g.mean)}, {"cov", to_json(g.cov)}}; }

inline Json to_json(const ConvergenceRow& r) {
  return {{"k", r.k},
          {"trace_distance", r.trace_distance},
          {"char_sup_dev", r.char_sup_dev},
          {"mean_dev", r.mean_dev},
          {"cov_dev", r.cov_dev},
          {"kraus_count", optional_json(r.kraus_count)},
          {"completeness_defect", optional_json(r.completeness_defect)},
          {"channel_state_gap", optional_json(r.channel_state_gap)},
          {"trace", r.trace}};
}

inline Json to_json(const ConvergenceReport& r) {
  Json grid = Json::array();
  for (Complex z : r.z_grid) grid.push_back(to_json(z));
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  Json j = {{"label", r.label},           {"alpha", to_json(r.alpha)},       {"cutoff", r.cutoff},
            {"z_grid", grid},             {"gaussification", to_json(r.params)},
            {"target", to_json(r.target)}, {"target_tail", r.target_tail},   {"rows", rows}};
  if (!r.scalar_sup_dev.empty()) j["scalar_sup_dev"] = r.scalar_sup_dev;
  if (!r.factorization_dev.empty()) j["factorization_dev"] = r.factorization_dev;
  return j;
}

inline Json to_json(const CapacityReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples) samples.push_back({{"k", s.k}, {"energy", s.energy}, {"value", s.value}});
  return {{"label", r.label},
          {"dephasing_capacity", optional_json(r.dephasing_capacity)},
          {"transmissivity", r.transmissivity},
          {"pure_loss_capacity", r.pure_loss_capacity},
          {"gap_sign", r.gap_sign},
          {"samples", samples}};
}

inline Json to_json(const QBoundReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"k", row.k},
                    {"energy", row.energy},
                    {"convolved", row.convolved},
                    {"product_rate", row.product_rate},
                    {"gaussification", row.gaussification},
                    {"two_copy", optional_json(row.two_copy)}});
  }
  return {{"label", r.label},
          {"no_signalling_defect", r.screen.no_signalling},
          {"marginal_symmetry_defect", r.screen.marginal_symmetry},
          {"rows", rows}};
}

/// CSV with columns k, trace_distance, char_sup_dev, mean_dev, cov_dev,
/// kraus_count, completeness_defect; missing values are empty fields.
inline std::string convergence_csv(const ConvergenceReport& r) {
  std::ostringstream out;
  out << "k,trace_distance,char_sup_dev,mean_dev,cov_dev,kraus_count,completeness_defect\n";
  for (const auto& row : r.rows) {
    out << row.k << ',' << format_double(row.trace_distance) << ',' << format_double(row.char_sup_dev) << ','
        << format_double(row.mean_dev) << ',' << format_double(row.cov_dev) << ',';
    if (row.kraus_count) out << *row.kraus_count;
    out << ',';
    if (row.completeness_defect) out << format_double(*row.completeness_defect);
    out << '\n';
  }
  return out.str();
}

inline std::string capacity_csv(const CapacityReport& r) {
  std::ostringstream out;
  out << "k,energy,coherent_information\n";
  for (const auto& s : r.samples) out << s.k << ',' << format_double(s.energy) << ',' << format_double(s.value) << '\n';
  return out.str();
}

}  // namespace bclt
