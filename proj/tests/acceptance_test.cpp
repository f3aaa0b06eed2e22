// Acceptance suite: one line per criterion, PASS or FAIL, each run at its
// stated tolerance. Exit status is the number of failed criteria. The slow
// N = 32000-class soliton table is gated behind --with-table3 (or the
// FKDV_ACCEPT_TABLE3 environment variable) and asserted at N <= 8000.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "fkdv/experiment.hpp"
#include "fkdv/fractional_laplacian.hpp"
#include "fkdv/implicit_solver.hpp"
#include "fkdv/invariants.hpp"
#include "fkdv/oracle.hpp"
#include "fkdv/reference_solutions.hpp"
#include "fkdv/time_steppers.hpp"

using namespace fkdv;
using clk = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass{true};
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

GridFn random_fn(const Grid& grid, std::mt19937& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::ArrayXd v(grid.n);
  for (int j = 0; j < grid.n; ++j) v[j] = dist(rng);
  return GridFn{grid, std::move(v)};
}

bool within_factor(double value, double target, double factor) {
  return value >= target / factor && value <= target * factor;
}

// ---------------------------------------------------------------- criterion 1
Outcome criterion_properties() {
  Outcome out;
  std::mt19937 rng(20240817);
  const double tol = 1e-11;
  double worst[7] = {0, 0, 0, 0, 0, 0, 0};
  for (double alpha : {1.0, 1.3, 1.5, 1.9}) {
    for (int n : {64, 257}) {
      const Grid g = build_grid(-15.0, 15.0, n, BoundaryMode::periodic);
      const FracLapOp op = build_operator(g, alpha);
      for (int rep = 0; rep < 25; ++rep) {
        const GridFn u = random_fn(g, rng);
        const GridFn v = random_fn(g, rng);
        const double nu = norm_l2(u), nv = norm_l2(v);

        const GridFn lu = apply(op, u);
        const GridFn lv = apply(op, v);
        worst[0] = std::max(worst[0], std::abs(inner(lu, v) - inner(u, lv)) /
                                          (norm_l2(lu) * nv + nu * norm_l2(lv)));

        const GridFn du = apply_dispersive(op, u);
        const GridFn commuted = central_difference(lu);
        worst[1] = std::max(worst[1],
                            (du.values - commuted.values).abs().maxCoeff() /
                                std::max(1e-300, commuted.values.abs().maxCoeff()));

        worst[2] = std::max(worst[2], std::abs(inner(du, u)) / (norm_l2(du) * nu));

        worst[3] = std::max(
            worst[3],
            std::abs(inner(v, forward_difference(u)) + inner(backward_difference(v), u)) /
                (nv * norm_l2(forward_difference(u)) + norm_l2(backward_difference(v)) * nu));
        worst[3] = std::max(
            worst[3], std::abs(inner(v, central_difference(u)) + inner(central_difference(v), u)) /
                          (nv * norm_l2(central_difference(u)) +
                           norm_l2(central_difference(v)) * nu));

        const GridFn vw{g, v.values * u.values};
        const Eigen::ArrayXd prod1 = bar_average(v).values * central_difference(u).values +
                                     bar_average(u).values * central_difference(v).values;
        worst[4] = std::max(worst[4], (central_difference(vw).values - prod1).abs().maxCoeff() /
                                          std::max(1e-300, prod1.abs().maxCoeff()));
        const Eigen::ArrayXd prod2 = shift(v, +1).values * forward_difference(u).values +
                                     u.values * forward_difference(v).values;
        worst[5] = std::max(worst[5], (forward_difference(vw).values - prod2).abs().maxCoeff() /
                                          std::max(1e-300, prod2.abs().maxCoeff()));

        const GridFn usq{g, u.values.square()};
        const Eigen::ArrayXd burgers = 0.5 * central_difference(usq).values;
        const Eigen::ArrayXd lhs = bar_average(u).values * central_difference(u).values;
        worst[6] = std::max(worst[6], (lhs - burgers).abs().maxCoeff() /
                                          std::max(1e-300, burgers.abs().maxCoeff()));
      }
    }
  }
  static const char* names[7] = {"symmetry",      "commutation", "annihilation",
                                 "summation-by-parts", "product-D", "product-D+",
                                 "burgers"};
  for (int k = 0; k < 7; ++k)
    out.require(worst[k] <= tol, std::string(names[k]) + " residual " + num(worst[k]));
  if (out.pass) out.detail = "max residual " + num(*std::max_element(worst, worst + 7));
  return out;
}

// ---------------------------------------------------------------- criterion 2
Outcome criterion_consistency() {
  Outcome out;
  auto f = [](double x) { return std::exp(-x * x); };
  for (double alpha : {1.0, 1.5}) {
    std::vector<Grid> grids;
    std::vector<int> ns = {128, 256, 512, 1024};
    for (int n : ns) grids.push_back(build_grid(-20.0, 20.0, n, BoundaryMode::truncated));
    const auto pts = consistency_study(f, grids, alpha, 1e-10);
    std::string seq;
    bool decreasing = true;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i) decreasing = decreasing && pts[i].l2_error < pts[i - 1].l2_error;
      seq += (i ? "," : "") + num(pts[i].l2_error);
    }
    const double order = std::log(pts.front().l2_error / pts.back().l2_error) / std::log(8.0);
    out.require(decreasing, "alpha=" + num(alpha) + " not strictly decreasing (" + seq + ")");
    out.require(order >= 1.0,
                "alpha=" + num(alpha) + " empirical order " + num(order) + " < 1 (" + seq + ")");
  }
  return out;
}

// ---------------------------------------------------------------- criterion 3
Outcome criterion_bo_table() {
  Outcome out;
  StudyConfig study;
  study.preset = preset_from_name("bo");
  study.scheme.alpha = 1.0;
  study.ns = {64, 128, 256, 512};

  study.scheme.scheme = Scheme::crank_nicolson;
  const ConvergenceReport cn = run_convergence(study);
  study.scheme.scheme = Scheme::euler_implicit;
  const ConvergenceReport ei = run_convergence(study);

  const double table[4] = {0.0650, 0.0084, 0.0019, 4.7034e-04};
  for (int i = 0; i < 4; ++i) {
    if (!cn.rows[i].error) {
      out.require(false, "CN N=" + std::to_string(study.ns[i]) + " failed");
      continue;
    }
    out.require(within_factor(*cn.rows[i].error, table[i], 2.0),
                "CN error(N=" + std::to_string(study.ns[i]) + ") = " + num(*cn.rows[i].error) +
                    " not within 2x of " + num(table[i]));
  }
  if (cn.rows[3].rate)
    out.require(std::abs(*cn.rows[3].rate - 2.0) <= 0.3,
                "CN rate " + num(*cn.rows[3].rate) + " outside 2.0 +/- 0.3");
  if (ei.rows[3].rate)
    out.require(std::abs(*ei.rows[3].rate - 1.0) <= 0.25,
                "EI rate " + num(*ei.rows[3].rate) + " outside 1.0 +/- 0.25");
  for (int i = 2; i < 4; ++i) {
    for (const auto& [ratio, name] :
         {std::pair{cn.rows[i].c1, "C1"}, {cn.rows[i].c2, "C2"}, {cn.rows[i].c3, "C3"}}) {
      out.require(ratio && *ratio >= 0.995 && *ratio <= 1.005,
                  std::string(name) + "(N=" + std::to_string(study.ns[i]) + ") = " +
                      (ratio ? num(*ratio) : "n/a") + " outside [0.995, 1.005]");
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 4
Outcome criterion_sine_table() {
  Outcome out;
  StudyConfig study;
  study.preset = preset_from_name("sine");
  study.scheme.alpha = 1.5;
  study.ns = {250, 500, 1000, 2000};
  study.n_ref = 8000;

  study.scheme.scheme = Scheme::crank_nicolson;
  const ConvergenceReport cn = run_convergence(study);
  study.scheme.scheme = Scheme::euler_implicit;
  const ConvergenceReport ei = run_convergence(study);

  const double table[4] = {0.0733, 0.0274, 0.0067, 0.0017};
  for (int i = 0; i < 4; ++i) {
    if (!cn.rows[i].error) {
      out.require(false, "CN N=" + std::to_string(study.ns[i]) + " failed");
      continue;
    }
    out.require(within_factor(*cn.rows[i].error, table[i], 2.0),
                "CN error(N=" + std::to_string(study.ns[i]) + ") = " + num(*cn.rows[i].error) +
                    " not within 2x of " + num(table[i]));
  }
  if (cn.rows[3].rate)
    out.require(std::abs(*cn.rows[3].rate - 2.0) <= 0.3,
                "terminal CN rate " + num(*cn.rows[3].rate) + " outside 2.0 +/- 0.3");
  if (ei.rows[3].rate)
    out.require(std::abs(*ei.rows[3].rate - 1.0) <= 0.3,
                "terminal EI rate " + num(*ei.rows[3].rate) + " outside 1.0 +/- 0.3");
  return out;
}

// ---------------------------------------------------------------- criterion 5
Outcome criterion_two_soliton_table() {
  Outcome out;
  StudyConfig study;
  study.preset = preset_from_name("kdv2");
  study.scheme.alpha = study.preset.alpha;
  study.scheme.scheme = Scheme::crank_nicolson;
  study.ns = {250, 500, 1000, 2000};
  const ConvergenceReport cn = run_convergence(study);

  const double table[4] = {1.1999, 0.1561, 0.0436, 0.0110};
  for (int i = 0; i < 4; ++i) {
    if (!cn.rows[i].error) {
      out.require(false, "CN N=" + std::to_string(study.ns[i]) + " failed");
      continue;
    }
    out.require(within_factor(*cn.rows[i].error, table[i], 2.0),
                "error(N=" + std::to_string(study.ns[i]) + ") = " + num(*cn.rows[i].error) +
                    " not within 2x of " + num(table[i]));
  }
  for (int i = 1; i < 4; ++i) {
    for (const auto& [ratio, name] : {std::pair{cn.rows[i].c1, "C1"}, {cn.rows[i].c2, "C2"}}) {
      out.require(ratio && *ratio >= 0.97 && *ratio <= 1.03,
                  std::string(name) + "(N=" + std::to_string(study.ns[i]) + ") = " +
                      (ratio ? num(*ratio) : "n/a") + " outside [0.97, 1.03]");
    }
  }

  // crest ordering in the numerical field at t = 40, N = 1000
  {
    const Grid g = build_grid(study.preset.a, study.preset.b, 1000, BoundaryMode::periodic);
    const GridFn u0 = make_initial(study.preset, g);
    SchemeConfig cfg = study.scheme;
    cfg.alpha = study.preset.alpha;
    try {
      const Trajectory traj = evolve(u0, study.preset.t_final, cfg);
      const GridFn& uf = traj.snapshots.back();
      int tall_idx = 0;
      uf.values.maxCoeff(&tall_idx);
      int short_idx = -1;
      double short_peak = -1e300;
      for (int j = 0; j < g.n; ++j) {
        if (g.node(j) < g.node(tall_idx) - 10.0 && uf.values[j] > short_peak) {
          short_peak = uf.values[j];
          short_idx = j;
        }
      }
      const std::string shorter =
          short_idx >= 0
              ? "(x=" + num(g.node(short_idx)) + ", u=" + num(short_peak) + ")"
              : "(no secondary crest found)";
      out.require(short_idx >= 0 && short_peak >= 1.5 && short_peak <= 4.5 &&
                      g.node(tall_idx) > g.node(short_idx),
                  "taller crest (x=" + num(g.node(tall_idx)) + ", u=" +
                      num(uf.values[tall_idx]) + ") not ahead of shorter " + shorter);
    } catch (const std::exception& e) {
      out.require(false, std::string("crest run failed: ") + e.what());
    }
  }
  return out;
}

// ---------------------------------------------------------------- criterion 6
Outcome criterion_trajectory_invariants() {
  Outcome out;
  const ExperimentPreset preset = preset_from_name("bo");
  const Grid g = build_grid(preset.a, preset.b, 256, BoundaryMode::periodic);
  const GridFn u0 = make_initial(preset, g);

  SchemeConfig cn_cfg;
  cn_cfg.alpha = 1.0;
  const double dt = select_dt(u0, cn_cfg);
  const FracLapOp op = build_operator(g, 1.0);
  const DispersiveSystem half = build_system(op, dt / 2, SolverBackend::circulant_spectral);
  GridFn u = u0;
  const double initial = norm_l2(u0);
  double worst_drift = 0.0;
  for (int s = 0; s < 1000; ++s) {
    u = step_crank_nicolson(u, dt, op, half, cn_cfg).first;
    worst_drift = std::max(worst_drift, std::abs(norm_l2(u) / initial - 1.0));
  }
  out.require(worst_drift <= 1e-8,
              "CN momentum drift " + num(worst_drift) + " over 1000 steps exceeds 1e-8");

  const DispersiveSystem full = build_system(op, dt, SolverBackend::circulant_spectral);
  u = u0;
  bool monotone = true;
  double worst_growth = 0.0;
  for (int s = 0; s < 1000; ++s) {
    const auto [next, report] = step_euler_implicit(u, dt, op, full);
    const double growth = report.l2_after / report.l2_before - 1.0;
    worst_growth = std::max(worst_growth, growth);
    monotone = monotone && growth <= 1e-10;
    u = next;
  }
  out.require(monotone, "EI norm growth " + num(worst_growth) + " exceeds 1e-10");
  if (out.pass)
    out.detail = "CN drift " + num(worst_drift) + ", EI worst growth " + num(worst_growth);
  return out;
}

// ---------------------------------------------------------------- criterion 7
Outcome criterion_splitting_equivalence() {
  Outcome out;
  const ExperimentPreset preset = preset_from_name("bo");
  const Grid g = build_grid(preset.a, preset.b, 256, BoundaryMode::periodic);
  GridFn ue = make_initial(preset, g);
  GridFn us = ue;
  SchemeConfig cfg;
  cfg.alpha = 1.0;
  const double dt = select_dt(ue, cfg);
  const FracLapOp op = build_operator(g, 1.0);
  const DispersiveSystem sys = build_system(op, dt, SolverBackend::circulant_spectral);
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    ue = step_euler_implicit(ue, dt, op, sys).first;
    us = step_operator_split(us, dt, op, sys).first;
    worst = std::max(worst, norm_l2(GridFn{g, us.values - ue.values}) / norm_l2(ue));
  }
  out.require(worst <= 1e-11, "splitting deviates by " + num(worst));
  if (out.pass) out.detail = "max relative gap " + num(worst);
  return out;
}

// ---------------------------------------------------------------- criterion 8
Outcome criterion_backend_equivalence() {
  Outcome out;
  std::mt19937 rng(777);
  const int sizes[] = {64, 128, 256, 257, 500, 512, 1024};
  const double alphas[] = {1.0, 1.3, 1.5, 1.9};
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const int n = sizes[k % 7];
    const double theta = (k % 2) ? 1e-3 : 1e-2;
    const double alpha = alphas[k % 4];
    const Grid g = build_grid(-15.0, 15.0, n, BoundaryMode::periodic);
    const FracLapOp op = build_operator(g, alpha);
    const DispersiveSystem spectral = build_system(op, theta, SolverBackend::circulant_spectral);
    const DispersiveSystem dense = build_system(op, theta, SolverBackend::dense_lu);
    const GridFn rhs = random_fn(g, rng);
    const GridFn ws = solve(spectral, rhs);
    const GridFn wd = solve(dense, rhs);
    worst = std::max(worst, norm_l2(GridFn{g, ws.values - wd.values}) / norm_l2(ws));
  }
  out.require(worst <= 1e-10, "worst backend gap " + num(worst));
  if (out.pass) out.detail = "worst relative gap " + num(worst) + " over 100 systems";
  return out;
}

// ------------------------------------------------------- gated Table-3 check
Outcome table3_gated() {
  Outcome out;
  StudyConfig study;
  study.preset = preset_from_name("kdv2_ei");
  study.scheme.alpha = study.preset.alpha;
  study.scheme.scheme = Scheme::euler_implicit;
  study.ns = {2000, 4000, 8000};
  const ConvergenceReport ei = run_convergence(study);
  const double table[3] = {2.5855, 1.0403, 0.5100};
  for (int i = 0; i < 3; ++i) {
    if (!ei.rows[i].error) {
      out.require(false, "EI N=" + std::to_string(study.ns[i]) + " failed");
      continue;
    }
    out.require(within_factor(*ei.rows[i].error, table[i], 2.0),
                "EI error(N=" + std::to_string(study.ns[i]) + ") = " + num(*ei.rows[i].error) +
                    " not within 2x of " + num(table[i]));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  bool with_table3 = std::getenv("FKDV_ACCEPT_TABLE3") != nullptr;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--with-table3") == 0) with_table3 = true;

  struct Entry {
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {"1 operator property suite", criterion_properties},
      {"2 consistency vs singular-integral oracle", criterion_consistency},
      {"3 Benjamin-Ono soliton table (alpha = 1)", criterion_bo_table},
      {"4 sine study at alpha = 1.5 (fine-grid reference)", criterion_sine_table},
      {"5 two-soliton table (alpha = 1.999)", criterion_two_soliton_table},
      {"6 trajectory invariants (CN drift, EI monotonicity)", criterion_trajectory_invariants},
      {"7 splitting/Euler-implicit equivalence", criterion_splitting_equivalence},
      {"8 solver backend equivalence", criterion_backend_equivalence},
  };

  int failures = 0;
  for (const Entry& entry : entries) {
    const auto t0 = clk::now();
    Outcome out;
    try {
      out = entry.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(clk::now() - t0).count();
    std::printf("%s criterion %s (%.1fs)%s%s\n", out.pass ? "PASS" : "FAIL", entry.name, secs,
                out.detail.empty() ? "" : " -- ", out.detail.c_str());
    std::fflush(stdout);
    if (!out.pass) ++failures;
  }

  const int core_failures = failures;
  if (with_table3) {
    const auto t0 = clk::now();
    Outcome out = table3_gated();
    const double secs = std::chrono::duration<double>(clk::now() - t0).count();
    std::printf("%s gated Euler-implicit soliton table (N <= 8000) (%.1fs)%s%s\n",
                out.pass ? "PASS" : "FAIL", secs, out.detail.empty() ? "" : " -- ",
                out.detail.c_str());
    if (!out.pass) ++failures;
  } else {
    std::printf("SKIP gated Euler-implicit soliton table (enable with --with-table3)\n");
  }

  std::printf("%d of 8 criteria failed%s\n", core_failures,
              failures > core_failures ? " (plus the gated table)" : "");
  return failures;
}
