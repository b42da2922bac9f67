#pragma once

// JSON emission for the report types. Requires nlohmann/json on the include
// path; the numeric headers do not depend on this file.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "specrecon/deck.hpp"
#include "specrecon/eigh.hpp"
#include "specrecon/recon_verify.hpp"
#include "specrecon/secular.hpp"
#include "specrecon/spectrum.hpp"
#include "specrecon/square_recon.hpp"

namespace specrecon {

using Json = nlohmann::ordered_json;

namespace detail {

template <typename T>
Json optional_json(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

}  // namespace detail

inline Json to_json(const Spectrum& s) {
  Json clusters = Json::array();
  for (const Cluster& c : s.clusters) clusters.push_back({c.begin, c.end});
  return Json{{"values", s.values}, {"clusters", clusters}, {"cluster_tol", s.cluster_tol}};
}

inline Json to_json(const EigenBasis& b) {
  return Json{{"n", b.n()}, {"spectrum", to_json(b.spectrum)}, {"vectors", b.vectors}};
}

inline Json to_json(const SpectralDeck& d) {
  Json cards = Json::array();
  for (const Spectrum& s : d.card_spectra) cards.push_back(s.values);
  return Json{{"n", d.size()}, {"cards", cards}};
}

/// {n, simple, table} with null in the columns of non-simple eigenvalues.
inline Json to_json(const SquareTable& t) {
  Json table = Json::array();
  for (std::size_t m = 0; m < t.n; ++m) {
    Json row = Json::array();
    for (std::size_t i = 0; i < t.n; ++i) row.push_back(detail::optional_json(t.at(m, i)));
    table.push_back(row);
  }
  return Json{{"n", t.n}, {"simple", t.simple}, {"table", table}, {"warnings", t.warnings}};
}

inline Json to_json(const SquareComparison& c) {
  Json cols = Json::array();
  for (const auto& col : c.columns) {
    cols.push_back({{"index", col.index}, {"max_deviation", col.max_deviation}, {"pass", col.pass}});
  }
  return Json{{"pass", c.pass},
              {"max_deviation", c.max_deviation},
              {"columns", cols},
              {"unmatched", c.unmatched}};
}

inline std::string to_string(Origin::Kind k) {
  return k == Origin::Kind::retained ? "retained" : "root";
}

/// {eigenvalues: [{value, origin, index, warning?}], vectors}.
inline Json to_json(const UpdateResult& r) {
  Json values = Json::array();
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
    Json e{{"value", r.eigenvalues.values[k]},
           {"origin", to_string(r.origins[k].kind)},
           {"index", r.origins[k].index}};
    if (r.near_degenerate[k]) e["warning"] = "near-degenerate";
    values.push_back(e);
  }
  return Json{{"t", r.t}, {"eigenvalues", values}, {"vectors", r.vectors}};
}

inline Json to_json(const DetIdentityReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes) {
    probes.push_back({{"lambda", p.lambda},
                      {"lhs", p.lhs},
                      {"rhs", p.rhs},
                      {"relative_deviation", p.relative_deviation}});
  }
  return Json{{"max_relative_deviation", r.max_relative_deviation}, {"probes", probes}};
}

inline Json to_json(const TheoremMainSample& s) {
  return Json{{"t", s.t},
              {"lowest_a", s.lowest_a},
              {"lowest_b", s.lowest_b},
              {"value_deviation", s.value_deviation},
              {"simple_a", s.simple_a},
              {"simple_b", s.simple_b},
              {"in_interval", s.in_interval},
              {"angle", detail::optional_json(s.angle)},
              {"secular_value_deviation", s.secular_value_deviation},
              {"secular_angle", detail::optional_json(s.secular_angle)},
              {"pass", s.pass}};
}

inline Json to_json(const std::vector<TheoremMainSample>& samples) {
  Json out = Json::array();
  for (const auto& s : samples) out.push_back(to_json(s));
  return out;
}

inline std::string to_string(SignCheck::Status s) {
  switch (s) {
    case SignCheck::Status::pass: return "pass";
    case SignCheck::Status::fail: return "fail";
    case SignCheck::Status::orthogonal_to_ones: return "orthogonal-to-ones";
  }
  return "fail";
}

inline Json to_json(const PairReport& r) {
  Json deck{{"index_aligned_equal", r.deck.index_aligned_equal},
            {"max_deviation", r.deck.max_deviation},
            {"card_deviation", r.deck.card_deviation},
            {"card_equal", r.deck.card_equal},
            {"multiset_equal", detail::optional_json(r.deck.multiset_equal)}};
  Json projections = Json::array();
  for (const auto& p : r.projections) {
    projections.push_back({{"cluster", {p.cluster_begin, p.cluster_end}},
                           {"eigenvalue", p.eigenvalue},
                           {"projection_a", p.projection_a},
                           {"projection_b", p.projection_b},
                           {"distance", p.distance},
                           {"pass", p.pass}});
  }
  Json signs = Json::array();
  for (const auto& s : r.signs) {
    signs.push_back({{"index", s.index}, {"status", to_string(s.status)}, {"distance", s.distance}});
  }
  return Json{{"n", r.n},
              {"tol", r.tol},
              {"pass", r.pass},
              {"spectra_equal",
               {{"equal", r.spectra.equal}, {"max_deviation", r.spectra.max_deviation}}},
              {"deck", deck},
              {"squares", r.squares ? to_json(*r.squares) : Json(nullptr)},
              {"projections",
               {{"cluster_structure_matches", r.cluster_structure_matches},
                {"clusters", projections}}},
              {"signs", signs},
              {"theorem_main", to_json(r.theorem_main)}};
}

inline Json to_json(const PermutationProbe& p) {
  return Json{{"found", p.found},
              {"tau", p.found ? Json(p.tau) : Json(nullptr)},
              {"sign", p.found ? Json(p.sign) : Json(nullptr)},
              {"distance", p.found ? Json(p.distance) : Json(nullptr)},
              {"min_distance", p.min_distance}};
}

}  // namespace specrecon
