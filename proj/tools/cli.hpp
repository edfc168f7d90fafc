// Copyright 2026 The qwalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qwalk/qwalk.hpp"

namespace qw::cli {

/// Bad invocation, malformed input or missing file (exit code 2).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Relative output paths are resolved against $QW_OUTPUT_DIR when set.
inline std::string resolve_output(const std::string& path) {
  if (path.empty() || path == "-") return path;
  std::filesystem::path p(path);
  const char* base = std::getenv("QW_OUTPUT_DIR");
  if (p.is_relative() && base && *base) p = std::filesystem::path(base) / p;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  return p.string();
}

inline void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(resolve_output(path));
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << text;
}

inline WalkSpec load_spec(const std::string& path) {
  try {
    return load_walk_spec(path);
  } catch (const Error& e) {
    throw UsageError(path + ": " + e.what());
  }
}

inline std::string matrix_text(const CMatrix& m) {
  std::ostringstream s;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    s << "  [";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) s << ", ";
      s << fmt17(m(r, c).real()) << (m(r, c).imag() < 0 ? " - " : " + ") << fmt17(std::abs(m(r, c).imag())) << "i";
    }
    s << "]\n";
  }
  return s.str();
}

inline int cmd_check(const std::string& path, double tol, std::ostream& out) {
  auto spec = load_spec(path);
  auto rep = check_unitarity(spec.walk, tol);
  out << "max residual " << fmt17(rep.max_residual()) << " (left cross " << fmt17(rep.left_cross) << ", right cross "
      << fmt17(rep.right_cross) << ", left norm " << fmt17(rep.left_norm) << ", right norm " << fmt17(rep.right_norm)
      << ")\n";
  if (spec.walk.is_scalar()) {
    auto q = check_quadrangularity(spec.walk.graph());
    out << "quadrangular: " << (q.passed ? "yes" : "no") << "\n";
  }
  if (!rep.passed) {
    out << "not unitary";
    if (rep.worst_element) out << " (worst at " << rep.worst_element->to_string() << ")";
    out << "\n";
    return 1;
  }
  out << "unitary\n";
  return 0;
}

/// "x[:y...][,component]"
inline std::pair<std::vector<std::int64_t>, std::size_t> parse_init(const std::string& text) {
  try {
    auto comma = text.find(',');
    std::string site = text.substr(0, comma);
    std::size_t comp = comma == std::string::npos ? 0 : std::stoul(text.substr(comma + 1));
    std::vector<std::int64_t> coords;
    std::stringstream ss(site);
    std::string item;
    while (std::getline(ss, item, ':')) coords.push_back(std::stoll(item));
    if (coords.empty()) throw UsageError("empty site");
    return {coords, comp};
  } catch (const std::logic_error&) {
    throw UsageError("malformed --init '" + text + "'");
  }
}

inline int cmd_evolve(const std::string& path, int steps, const std::string& init, std::int64_t ring,
                      const std::string& out_path, std::ostream& out) {
  auto spec = load_spec(path);
  const auto& walk = spec.walk;
  if (ring <= 0) ring = no_wrap_ring_size(walk, steps, 1);
  auto lat = Lattice::ring(walk.graph().family(), ring);
  auto [site, comp] = parse_init(init);
  LatticeState st;
  try {
    st = LatticeState::delta(lat, walk.coin_dim(), site, comp);
  } catch (const Error& e) {
    throw UsageError(std::string("--init: ") + e.what());
  }
  st = evolve(walk, st, steps);
  std::string csv = "site,component,prob\n";
  const auto local = st.local_dim();
  for (std::size_t s = 0; s < lat.site_count(); ++s) {
    for (std::size_t c = 0; c < local; ++c) {
      csv += lat.site_label(s) + "," + std::to_string(c) + "," +
             fmt17(std::norm(st.amplitudes[static_cast<Eigen::Index>(s * local + c)])) + "\n";
    }
  }
  write_output(out_path, csv, out);
  out << "evolved " << steps << " steps on " << lat.site_count() << " sites; norm " << fmt17(st.norm()) << "\n";
  return 0;
}

inline int cmd_dispersion(const std::string& path, int samples, const std::string& out_path, double tol,
                          std::ostream& out) {
  auto spec = load_spec(path);
  MomentumWalk mw;
  try {
    mw = to_momentum(spec.walk);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (mw.dim() != 1 || mw.coin_dim() > 2) throw UsageError("dispersion needs a walk on Z with s <= 2");
  auto d = dispersion(mw, samples, std::max(tol, 1e-9));
  if (!d.su2) d = track_branches(d);
  auto v = group_velocity(d);
  auto dc = diffusion_coefficient(d);
  std::string csv = "k,omega_plus,omega_minus,v_group,diff_coeff\n";
  const double nan = std::nan("");
  for (std::size_t i = 0; i < d.k.size(); ++i) {
    const double wm = d.branches.size() > 1 ? d.branches[1][i] : nan;
    csv += fmt17(d.k[i]) + "," + fmt17(d.branches[0][i]) + "," + fmt17(wm) + "," + fmt17(v.flagged[i] ? nan : v.value[i]) +
           "," + fmt17(dc.flagged[i] ? nan : dc.value[i]) + "\n";
  }
  write_output(out_path, csv, out);
  out << "sampled " << samples << " wave numbers" << (d.su2 ? " (SU(2) gauge)" : "") << "\n";
  return 0;
}

inline int cmd_coarse_grain(const std::string& path, std::int64_t m, std::int64_t mp, const std::string& out_path,
                            std::ostream& out) {
  auto spec = load_spec(path);
  auto cg = coarse_grain(spec.walk, CosetTiling(spec.walk.graph().family(), m, mp));
  WalkSpec res{spec.name.empty() ? "coarse-grained" : spec.name + "-cg", cg.result, nlohmann::json::object()};
  res.params["tiling"] = {m, mp};
  const auto& gens = spec.walk.graph().generators();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    out << gens[i].label << ": tau=(" << cg.tau[i][0] + 1 << "," << cg.tau[i][1] + 1 << ") shifts=(" << cg.coarse_shift[i][0]
        << "," << cg.coarse_shift[i][1] << ")\n";
  }
  write_output(out_path, serialize_walk_spec(res), out);
  return 0;
}

inline int cmd_classify(const std::string& path, double tol, std::ostream& out) {
  auto spec = load_spec(path);
  auto res = classify(spec.walk, tol);
  for (const auto& b : res.blocks) {
    out << "j=(";
    for (std::size_t l = 0; l < b.j.size(); ++l) out << (l ? "," : "") << b.j[l];
    out << ") h=(";
    for (std::size_t l = 0; l < b.h_tilde.size(); ++l) out << (l ? "," : "") << b.h_tilde[l];
    out << ") theta=" << fmt17(b.theta) << "\n";
  }
  out << "direct sum of " << res.blocks.size() << " shift(s); affine dispersion residual "
      << fmt17(affine_dispersion_residual(res)) << "\n";
  return 0;
}

inline int cmd_solve(const std::string& input, int starts, std::uint64_t seed, const std::string& out_path, double tol,
                     std::ostream& out) {
  std::string text = input;
  if (std::filesystem::exists(input)) text = read_text_file(input);
  CayleyGraph graph;
  try {
    graph = parse_presentation(text);
  } catch (const Error& e) {
    throw UsageError(std::string("presentation: ") + e.what());
  }
  SolverOptions opts;
  opts.starts = starts;
  opts.seed = seed;
  opts.tol = tol;
  auto sols = brute_force_scalar_solutions(graph, opts);
  std::string csv;
  for (const auto& g : graph.generators()) csv += g.label + "_re," + g.label + "_im,";
  csv += "residual\n";
  std::size_t mono = 0;
  for (const auto& s : sols) {
    for (auto z : s.z) csv += fmt17(z.real()) + "," + fmt17(z.imag()) + ",";
    csv += fmt17(s.residual) + "\n";
    if (is_monoidal_solution(s)) ++mono;
  }
  write_output(out_path, csv, out);
  out << sols.size() << " solution(s) found (" << mono << " monoidal) from " << starts << " starts";
  if (sols.empty()) out << "; inconclusive";
  out << "\n";
  return 0;
}

inline int cmd_dihedral_make(const std::string& kase, double p, double q, double mu, int s1, int s2, int s3, double phase,
                             std::int64_t n, const std::string& out_path, std::ostream& out) {
  DihedralParams prm;
  try {
    prm.kase = parse_dihedral_case(kase);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  prm.p = p;
  prm.q = q;
  prm.mu = kase == "mu0" ? 0.0 : mu;
  prm.s1 = s1;
  prm.s2 = s2;
  prm.s3 = s3;
  prm.phase = phase;
  auto walk = n > 0 ? instantiate_finite_dihedral(prm, n) : make_dihedral_walk(prm);
  WalkSpec spec{std::string("dihedral-") + to_string(prm.kase), walk, nlohmann::json::object()};
  spec.params = {{"case", to_string(prm.kase)}, {"p", p},   {"q", q},       {"mu", prm.mu},
                 {"s1", s1},                    {"s2", s2}, {"s3", s3},     {"phase", phase}};
  if (n > 0) spec.params["n"] = n;
  write_output(out_path, serialize_walk_spec(spec), out);
  out << "unitarity residual " << fmt17(check_unitarity(walk).max_residual()) << "\n";
  return 0;
}

inline int cmd_dihedral_enumerate(std::int64_t max_n, std::ostream& out) {
  auto graphs = enumerate_admissible_graphs(max_n);
  for (const auto& g : graphs) out << format_presentation(g.graph) << "\n";
  out << graphs.size() << " admissible graph(s)\n";
  return 0;
}

inline int cmd_parity(const std::string& path, std::ostream& out) {
  auto spec = load_spec(path);
  auto cert = parity_test(spec.walk);
  out << "parity " << (cert.found ? "found" : "not found") << "; residual " << fmt17(cert.residual) << "\n";
  if (cert.found) out << "P =\n" << matrix_text(cert.p);
  return cert.found ? 0 : 1;
}

inline int cmd_canonical(const std::string& path, double tol, std::ostream& out) {
  auto spec = load_spec(path);
  auto cf = extract_canonical_form(spec.walk, std::max(tol, 1e-9));
  out << "theta " << fmt17(cf.theta) << "\ntheta' " << fmt17(cf.theta_prime) << "\nnu " << fmt17(cf.nu) << "\nmu "
      << fmt17(cf.mu) << "\ns " << cf.s << "\nphase " << fmt17(cf.phase) << "\nresidual " << fmt17(cf.residual)
      << "\nU =\n"
      << matrix_text(cf.u);
  if (cf.closed_form) {
    const auto& a = *cf.closed_form;
    out << "family " << to_string(a.kase) << (a.open_ranges ? "" : " (boundary)") << ": p=" << fmt17(a.params.p)
        << " q=" << fmt17(a.params.q) << " mu=" << fmt17(a.params.mu) << " s1=" << a.params.s1 << " s2=" << a.params.s2
        << " s3=" << a.params.s3 << "\n";
  }
  try {
    auto dp = dispersion_params(spec.walk);
    out << "delta " << fmt17(dp.delta) << "\ngamma " << fmt17(dp.gamma) << "\n";
  } catch (const Error&) {
  }
  return 0;
}

inline std::string plot_script(const std::string& csv_path) {
  std::string s = R"PY(import csv
import numpy as np
import matplotlib.pyplot as plt

k = np.linspace(-np.pi, np.pi, 1024, endpoint=False)
fig, axes = plt.subplots(1, 3, figsize=(13, 4))
for delta, color in [(0.98, "tab:blue"), (0.36, "tab:orange"), (0.09, "tab:green")]:
    for ax, gamma, style in [(axes[0], 1 - delta, "-"), (axes[1], delta - 1, "-")]:
        w = np.arccos(np.clip(delta * np.cos(k) + gamma, -1, 1))
        ax.plot(k, w, style, color=color, label=f"delta={delta}")
        ax.plot(k, -w, style, color=color)
axes[0].set_title("delta + gamma = 1")
axes[1].set_title("delta - gamma = 1")
)PY";
  s += "rows = list(csv.DictReader(open(" + std::string("r\"") + csv_path + "\")))\n";
  s += R"PY(kk = np.array([float(r["k"]) for r in rows])
axes[2].plot(kk, [float(r["omega_plus"]) for r in rows], label="omega_plus")
axes[2].plot(kk, [float(r["omega_minus"]) for r in rows], label="omega_minus")
axes[2].set_title("sampled walk")
for ax in axes:
    ax.set_xlabel("k")
    ax.set_ylabel("omega(k)")
    ax.legend()
fig.tight_layout()
fig.savefig("dispersion.png", dpi=150)
)PY";
  return s;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Discrete-time quantum walks on Cayley graphs"};
  app.require_subcommand(1);
  double tol = kDefaultTol;
  app.add_option("--tol", tol, "Tolerance for unitarity and classification checks")->capture_default_str();

  std::string spec, out_path, init = "0", presentation, kase = "generic", csv;
  int steps = 10, samples = 1024, starts = 256, s1 = 1, s2 = 1, s3 = 1;
  std::int64_t ring = 0, m = 0, mp = 0, n = 0, max_n = 2;
  std::uint64_t seed = 1;
  double p = 0.8, q = 0.2, mu = 0.5, phase = 0.0;

  auto* check = app.add_subcommand("check", "Verify unitarity of a walk spec");
  check->add_option("spec", spec)->required();

  auto* ev = app.add_subcommand("evolve", "Evolve a localized state and write the distribution");
  ev->add_option("spec", spec)->required();
  ev->add_option("--steps", steps)->check(CLI::NonNegativeNumber);
  ev->add_option("--init", init, "site[:site...][,component]");
  ev->add_option("--sites", ring, "Ring size (default: large enough not to wrap)");
  ev->add_option("--out", out_path);

  auto* disp = app.add_subcommand("dispersion", "Sample the dispersion relation on [-pi, pi)");
  disp->add_option("spec", spec)->required();
  disp->add_option("--samples", samples)->check(CLI::Range(3, 1 << 22));
  disp->add_option("--out", out_path);

  auto* cgc = app.add_subcommand("coarse-grain", "Coarse-grain a scalar dihedral walk to Z");
  cgc->add_option("spec", spec)->required();
  cgc->add_option("--m", m);
  cgc->add_option("--m-prime", mp);
  cgc->add_option("--out", out_path);

  auto* cls = app.add_subcommand("classify", "Reduce a scalar walk on F x Z^d to a sum of shifts");
  cls->add_option("spec", spec)->required();

  auto* solve = app.add_subcommand("solve", "Search for scalar walks on a presentation");
  solve->add_option("presentation", presentation, "Presentation text or file")->required();
  solve->add_option("--starts", starts)->check(CLI::NonNegativeNumber);
  solve->add_option("--seed", seed);
  solve->add_option("--out", out_path);

  auto* dih = app.add_subcommand("dihedral", "Dihedral walk families");
  dih->require_subcommand(1);
  auto* make = dih->add_subcommand("make", "Emit a closed-form scalar walk");
  make->add_option("--case", kase)->check(CLI::IsMember({"generic", "mu0", "ze0", "zd0"}));
  make->add_option("--p", p);
  make->add_option("--q", q);
  make->add_option("--mu", mu);
  make->add_option("--s1", s1);
  make->add_option("--s2", s2);
  make->add_option("--s3", s3);
  make->add_option("--phase", phase);
  make->add_option("--n", n, "Finite dihedral order (0: infinite)");
  make->add_option("--out", out_path);
  auto* en = dih->add_subcommand("enumerate", "List admissible generating sets");
  en->add_option("--max-n", max_n)->check(CLI::Range(0, 6));

  auto* par = app.add_subcommand("parity", "Search for a parity operator of a walk on Z");
  par->add_option("spec", spec)->required();
  auto* can = app.add_subcommand("canonical", "Extract the canonical form of a walk on Z");
  can->add_option("spec", spec)->required();
  auto* plot = app.add_subcommand("plot-script", "Emit a plotting script for a dispersion CSV");
  plot->add_option("csv", csv)->required();
  plot->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }
  try {
    if (*check) return cmd_check(spec, tol, out);
    if (*ev) return cmd_evolve(spec, steps, init, ring, out_path, out);
    if (*disp) return cmd_dispersion(spec, samples, out_path, tol, out);
    if (*cgc) return cmd_coarse_grain(spec, m, mp, out_path, out);
    if (*cls) return cmd_classify(spec, tol, out);
    if (*solve) return cmd_solve(presentation, starts, seed, out_path, tol, out);
    if (*make) return cmd_dihedral_make(kase, p, q, mu, s1, s2, s3, phase, n, out_path, out);
    if (*en) return cmd_dihedral_enumerate(max_n, out);
    if (*par) return cmd_parity(spec, out);
    if (*can) return cmd_canonical(spec, tol, out);
    if (*plot) {
      write_output(out_path, plot_script(csv), out);
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qw::cli
