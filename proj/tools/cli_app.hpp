#pragma once

// Command-line front end. Lives in a header so the test suite can drive it
// in-process with captured streams.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "specrecon.hpp"
#include "specrecon/json.hpp"

namespace specrecon::cli {

enum ExitCode : int { kOk = 0, kCheckFailed = 1, kInputError = 2 };

struct RunConfig {
  std::string subcommand;
  std::vector<std::string> matrices;
  std::string x = "ones";
  double t = 0.0;
  std::string t_samples = "16,-1,-0.0625";
  double tol = 1e-8;
  std::optional<double> cluster_tol;
  double deflate_tol = kDefaultDeflateTol;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool multiset_deck = false;
  std::size_t index = 0;
  std::size_t probes = 20;
  std::size_t n_cap = kDefaultProbeCap;
};

namespace detail {

inline SymmetricMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open matrix file '" + path + "'");
  return parse_matrix(in);
}

inline Vector load_x(const std::string& spec, std::size_t n) {
  if (spec == "ones") return ones(n);
  std::ifstream in(spec);
  if (!in) throw ParseError("cannot open vector file '" + spec + "'");
  Vector x = parse_vector(in);
  if (x.size() != n) throw InvalidArgument("vector dimension does not match the matrix");
  return x;
}

inline std::vector<double> parse_t_samples(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) parts.push_back(part);
  if (parts.size() != 3) throw ParseError("--t-samples expects count,lo,hi");
  const std::size_t count = specrecon::detail::parse_dimension(parts[0]);
  const double lo = specrecon::detail::parse_real(parts[1]);
  const double hi = specrecon::detail::parse_real(parts[2]);
  if (!(lo < hi)) throw ParseError("--t-samples needs lo < hi");
  return t_samples(count, lo, hi);
}

inline void require_dimensions(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.n() != b.n()) throw InvalidArgument("matrices have different dimensions");
}

inline std::string fmt(double v) {
  std::ostringstream o;
  o << std::setprecision(10) << v;
  return o.str();
}

inline void print_values(std::ostream& out, const std::vector<double>& v) {
  for (std::size_t k = 0; k < v.size(); ++k) out << (k ? " " : "") << fmt(v[k]);
  out << '\n';
}

inline const char* verdict(bool ok) { return ok ? "pass" : "FAIL"; }

}  // namespace detail

/// Dispatches one subcommand. JSON (or text) goes to `out`, diagnostics to `err`.
inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using namespace specrecon::detail;
  using namespace detail;
  const bool json = cfg.format == "json";
  try {
    if (cfg.tol <= 0.0 || cfg.deflate_tol <= 0.0 || (cfg.cluster_tol && *cfg.cluster_tol <= 0.0)) {
      throw InvalidArgument("tolerances must be positive");
    }
    const SymmetricMatrix a = load_matrix(cfg.matrices.at(0));
    const std::string& cmd = cfg.subcommand;

    if (cmd == "eig") {
      const EigenBasis b = eigh(a, cfg.cluster_tol);
      if (json) {
        out << to_json(b).dump(2) << '\n';
      } else {
        out << "eigenvalues: ";
        print_values(out, b.spectrum.values);
        for (std::size_t k = 0; k < b.n(); ++k) {
          out << "p" << k << ": ";
          print_values(out, b.vectors[k]);
        }
      }
      return kOk;
    }

    if (cmd == "deck") {
      const SpectralDeck d = deck(a);
      if (json) {
        out << to_json(d).dump(2) << '\n';
      } else {
        for (std::size_t m = 0; m < d.size(); ++m) {
          out << "card " << m << ": ";
          print_values(out, d[m].values);
        }
      }
      return kOk;
    }

    if (cmd == "squares") {
      const Spectrum spec = eigh(a, cfg.cluster_tol).spectrum;
      const SquareTable t = square_table_from_deck(spec, deck(a, spec));
      if (json) {
        out << to_json(t).dump(2) << '\n';
      } else {
        for (std::size_t m = 0; m < t.n; ++m) {
          for (std::size_t i = 0; i < t.n; ++i) {
            const auto v = t.at(m, i);
            out << (i ? " " : "") << std::setw(14) << (v ? fmt(*v) : std::string("-"));
          }
          out << '\n';
        }
      }
      for (const auto& w : t.warnings) err << "warning: " << w << '\n';
      return t.consistent() ? kOk : kCheckFailed;
    }

    if (cmd == "rank1") {
      const Vector x = load_x(cfg.x, a.n());
      const UpdateResult r = rank1_update(eigh(a, cfg.cluster_tol), x, cfg.t, cfg.deflate_tol);
      if (json) {
        out << to_json(r).dump(2) << '\n';
      } else {
        for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) {
          out << fmt(r.eigenvalues.values[k]) << "  " << to_string(r.origins[k].kind) << ' '
              << r.origins[k].index << (r.near_degenerate[k] ? "  near-degenerate" : "") << '\n';
        }
      }
      return kOk;
    }

    if (cmd == "det-check") {
      const Vector x = load_x(cfg.x, a.n());
      const DetIdentityReport r = verify_det_identity(a, x, cfg.t, cfg.probes, cfg.seed);
      const bool ok = r.max_relative_deviation <= 1e-9;
      if (json) {
        Json j = to_json(r);
        j["pass"] = ok;
        out << j.dump(2) << '\n';
      } else {
        out << "max relative deviation: " << fmt(r.max_relative_deviation) << "  "
            << verdict(ok) << '\n';
      }
      return ok ? kOk : kCheckFailed;
    }

    const SymmetricMatrix b = load_matrix(cfg.matrices.at(1));
    require_dimensions(a, b);

    if (cmd == "gm-verify") {
      GmOptions opt;
      opt.tol = cfg.tol;
      opt.multiset_deck = cfg.multiset_deck;
      opt.t_samples = parse_t_samples(cfg.t_samples);
      const PairReport r = verify_gm(a, b, opt);
      if (json) {
        out << to_json(r).dump(2) << '\n';
      } else {
        out << "spectra      " << verdict(r.spectra.equal) << "  " << fmt(r.spectra.max_deviation)
            << '\n';
        out << "deck         " << verdict(r.deck.index_aligned_equal) << "  "
            << fmt(r.deck.max_deviation) << '\n';
        if (r.deck.multiset_equal) out << "deck (multi) " << verdict(*r.deck.multiset_equal) << '\n';
        out << "squares      " << (r.squares ? verdict(r.squares->pass) : "skipped") << '\n';
        out << "projections  " << r.projections.size() << " clusters\n";
        for (const auto& p : r.projections) {
          out << "  " << fmt(p.eigenvalue) << "  " << verdict(p.pass) << "  " << fmt(p.distance)
              << '\n';
        }
        for (const auto& s : r.signs) {
          out << "sign " << s.index << "  " << to_string(s.status) << "  " << fmt(s.distance)
              << '\n';
        }
        out << "overall      " << verdict(r.pass) << '\n';
      }
      return r.pass ? kOk : kCheckFailed;
    }

    if (cmd == "tmain") {
      const auto samples = verify_theorem_main(a, b, parse_t_samples(cfg.t_samples), cfg.tol);
      bool ok = true;
      for (const auto& s : samples) ok = ok && s.pass;
      if (json) {
        out << Json{{"pass", ok}, {"samples", to_json(samples)}}.dump(2) << '\n';
      } else {
        for (const auto& s : samples) {
          out << "t=" << fmt(s.t) << "  lowest " << fmt(s.lowest_a) << " / " << fmt(s.lowest_b)
              << (s.in_interval ? "" : "  outside-T") << "  " << verdict(s.pass) << '\n';
        }
      }
      return ok ? kOk : kCheckFailed;
    }

    if (cmd == "probe-tau") {
      const PermutationProbe p = probe_permutation_conjecture(a, b, cfg.index, cfg.n_cap, cfg.tol);
      if (json) {
        out << to_json(p).dump(2) << '\n';
      } else if (p.found) {
        out << "tau:";
        for (std::size_t k : p.tau) out << ' ' << k;
        out << "  sign " << p.sign << "  distance " << fmt(p.distance) << '\n';
      } else {
        out << "exhausted, min distance " << fmt(p.min_distance) << '\n';
      }
      return p.found ? kOk : kCheckFailed;
    }

    throw InvalidArgument("unknown subcommand '" + cmd + "'");
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kCheckFailed;
  }
}

/// Parses argv into a RunConfig and runs it.
inline int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral reconstruction of symmetric matrix eigenvectors"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;

  app.add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"json", "text"}));
  app.add_option("--seed", cfg.seed, "Seed for randomized probes");
  app.add_option("--tol", cfg.tol, "Comparison tolerance");
  app.add_option("--cluster-tol", cfg.cluster_tol, "Eigenvalue clustering tolerance");
  app.add_option("--deflate-tol", cfg.deflate_tol, "Deflation tolerance relative to |x|^2");

  auto one_matrix = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("matrix", cfg.matrices, "Matrix file")->required()->expected(1);
    return sub;
  };
  auto two_matrices = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("matrices", cfg.matrices, "Matrix files A and B")->required()->expected(2);
    return sub;
  };

  one_matrix("eig", "Eigendecomposition");
  one_matrix("deck", "Spectra of the vertex-deleted principal submatrices");
  one_matrix("squares", "Squared eigenvector entries reconstructed from the deck");
  auto* rank1 = one_matrix("rank1", "Eigenpairs of A + t x x^T via the secular equation");
  rank1->add_option("--x", cfg.x, "Vector file or 'ones'");
  rank1->add_option("--t", cfg.t, "Update scale")->required();
  auto* det = one_matrix("det-check", "Check det(A + t x x^T - l I) = det(A - l I) P_t(l)");
  det->add_option("--x", cfg.x, "Vector file or 'ones'");
  det->add_option("--t", cfg.t, "Update scale")->required();
  det->add_option("--probes", cfg.probes, "Number of probe points");

  auto* gm = two_matrices("gm-verify", "Compare two matrices under the Godsil-McKay hypotheses");
  gm->add_flag("--multiset-deck", cfg.multiset_deck, "Compare deck cards as a multiset");
  gm->add_option("--t-samples", cfg.t_samples, "count,lo,hi");
  auto* tm = two_matrices("tmain", "Lowest eigenpairs of A + tJ and B + tJ");
  tm->add_option("--t-samples", cfg.t_samples, "count,lo,hi");
  auto* probe = two_matrices("probe-tau", "Search a coordinate permutation between eigenvectors");
  probe->add_option("--index", cfg.index, "Eigenvalue index (0-based, descending)")->required();
  probe->add_option("--n-cap", cfg.n_cap, "Largest n searched exhaustively");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  return run(cfg, out, err);
}

}  // namespace specrecon::cli
