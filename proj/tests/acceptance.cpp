// Acceptance gate: one line per criterion, [PASS]/[FAIL], exit code = number
// of failed criteria. Argument 1 (optional) is the path of the command-line
// binary, needed by the determinism criterion.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "qk/curvature.hpp"
#include "qk/identities.hpp"
#include "qk/io.hpp"
#include "qk/models.hpp"
#include "qk/mu.hpp"
#include "qk/rng.hpp"
#include "qk/structure.hpp"

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string detail(double residual, double secs) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "max residual %.3e, %.1fs", residual, secs);
  return buf;
}

int g_failures = 0;

void report(int id, const char* name, bool pass, const std::string& info) {
  std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id, name, info.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

int run_cmd(const std::string& cli, const std::string& args, const std::string& out) {
  const std::string cmd = "\"" + cli + "\" " + args + " > " + out + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

} // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "";

  // ---- 1: space-form calibration values ------------------------------------
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int m : {2, 3}) {
      const qk::QuaternionicStructure Q = qk::standard_structure(m);
      const qk::CurvatureTensor R0 = qk::build_r0(Q);
      const qk::Index n = Q.dim();
      worst = std::max(worst, qk::symmetry_residual(R0));
      worst = std::max(worst, qk::bianchi_residual(R0));
      qk::Rng rng(101);
      for (int i = 0; i < 50; ++i) {
        const auto [X, Y] = qk::sample_q_orthogonal_pair(Q, rng);
        worst = std::max(worst, std::fabs(R0.value(X, Q.I * X, X, Q.I * X) - 1.0));
        worst = std::max(worst, std::fabs(R0.value(X, Y, X, Y) - 0.25));
        worst = std::max(worst, std::fabs(R0.value(X, Q.J * Y, X, Q.J * Y) - 0.25));
      }
      const qk::Matrix ric = qk::ricci(R0);
      worst = std::max(
          worst, (ric - (m + 2) * qk::Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
      worst = std::max(worst, std::fabs(qk::scalar_curv(R0) - 4.0 * m * (m + 2)));
    }
    const double secs = seconds_since(t0);
    report(1, "space-form calibration", worst < 1e-10 && secs < 5.0, detail(worst, secs));
  }

  // ---- 2 + 3: four-term trace and trace-freeness of projected tensors ------
  {
    const auto t0 = Clock::now();
    double worst_trace = 0.0;
    double worst_ric = 0.0;
    for (int m : {2, 3}) {
      const qk::QuaternionicStructure Q = qk::standard_structure(m);
      const int count = m == 2 ? 100 : 20;
      for (int i = 0; i < count; ++i) {
        const qk::CurvatureTensor R1 =
            qk::random_r1(Q, static_cast<uint64_t>(1000 * m + i));
        const double scale = std::max(1.0, R1.max_abs());
        qk::Rng rng(static_cast<uint64_t>(7000 * m + i));
        for (int k = 0; k < 1000; ++k) {
          const qk::Vector Y = rng.unit_vector(Q.dim());
          const qk::Vector V = rng.unit_vector(Q.dim());
          const qk::Vector W = rng.unit_vector(Q.dim());
          worst_trace =
              std::max(worst_trace, std::fabs(qk::four_trace(R1, Q, Y, V, W)) / scale);
        }
        worst_ric = std::max(worst_ric, qk::ricci(R1).cwiseAbs().maxCoeff() / scale);
      }
    }
    const double secs = seconds_since(t0);
    report(2, "four-term trace on random admissible tensors",
           worst_trace < 1e-10 && secs < 60.0, detail(worst_trace, secs));
    report(3, "projected tensors are trace-free", worst_ric < 1e-10,
           detail(worst_ric, secs));
  }

  // ---- 4: partial basis sums ------------------------------------------------
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    auto check = [&](const qk::CurvatureTensor& R1, const qk::QuaternionicStructure& Q,
                     qk::Rng& rng) {
      const double r1s = std::max(1.0, R1.max_abs());
      const int two_m = 2 * Q.m;
      for (int rep = 0; rep < 3; ++rep) {
        const qk::Vector s = rng.unit_vector(3);
        const qk::QuaternionicStructure Q2 = qk::rotate_frame(Q, s[0], s[1], s[2]);
        const qk::Vector X = rng.unit_vector(Q.dim());
        const qk::BasisSums bs = qk::basis_sums(R1, Q2, 1.0, X);
        const double f = R1.value(X, Q2.J * X, X, Q2.J * X);
        worst = std::max(worst, std::fabs(bs.s1) / (r1s * r1s));
        worst = std::max(worst, std::fabs(bs.t0) / r1s);
        worst = std::max(worst,
                         std::fabs(bs.s0 - (two_m - 2) * f) / std::max(1.0, std::fabs(f)));
      }
    };
    qk::Rng rng(404);
    for (int m : {2, 3}) {
      const qk::QuaternionicStructure Q = qk::standard_structure(m);
      const int count = m == 2 ? 20 : 5;
      for (int i = 0; i < count; ++i)
        check(qk::random_r1(Q, static_cast<uint64_t>(3000 * m + i)), Q, rng);
    }
    const qk::ModelSpace gr = qk::grassmannian_model(2);
    const qk::QKDecomposition dec = qk::decompose(gr.R, gr.Q);
    check(dec.r1, gr.Q, rng);
    const double secs = seconds_since(t0);
    report(4, "adapted-frame basis sums", worst < 1e-9 && secs < 30.0, detail(worst, secs));
  }

  // ---- 5: symmetric-space consequences on the grassmannian ------------------
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int m : {2, 3}) {
      const qk::ModelSpace gr = qk::grassmannian_model(m);
      const qk::QKDecomposition dec = qk::decompose(gr.R, gr.Q);
      const double rsq = std::max(1.0, gr.R.max_abs() * gr.R.max_abs());
      qk::Rng rng(static_cast<uint64_t>(500 + m));
      for (int k = 0; k < 1000; ++k) {
        const qk::Vector V = rng.unit_vector(gr.Q.dim());
        const qk::Vector X = rng.unit_vector(gr.Q.dim());
        const qk::Vector Y = rng.unit_vector(gr.Q.dim());
        const qk::Vector Z = rng.unit_vector(gr.Q.dim());
        const qk::Vector W = rng.unit_vector(gr.Q.dim());
        worst = std::max(worst, qk::ts_defect(gr.R, dec, gr.Q, V, X, Y, Z, W) / rsq);
      }
      const qk::CurvatureTensor qr1 = qk::q_quadratic(dec.r1);
      const qk::CurvatureTensor expect = (2.0 * m + 4.0) * dec.kappa * dec.r1;
      worst = std::max(worst, (qr1 - expect).max_abs() / rsq);
    }
    const double secs = seconds_since(t0);
    report(5, "parallel-curvature identities on the grassmannian",
           worst < 1e-9 && secs < 300.0, detail(worst, secs));
  }

  // ---- 6: dichotomy of the optimized invariant ------------------------------
  // Models and reports are kept for criteria 7 and 8.
  std::vector<qk::ModelSpace> models;
  qk::MuReport gr2_rep;
  qk::QKDecomposition gr2_dec;
  bool have_gr2_rep = false;
  {
    const auto t0 = Clock::now();
    bool ok = true;
    std::string info;
    char buf[128];

    for (int m : {2, 3}) {
      models.push_back(qk::hp_model(m, 1.0));
      const qk::ModelSpace& hp = models.back();
      const qk::QKDecomposition dec = qk::decompose(hp.R, hp.Q);
      const qk::MuReport rep = qk::estimate_mu(dec, hp.Q, {});
      ok = ok && rep.dichotomy_verdict == "zero" && std::fabs(rep.mu_hat) < 1e-6 * dec.kappa;
      std::snprintf(buf, sizeof buf, "hp%d %.1e/%s ", m, rep.mu_hat,
                    rep.dichotomy_verdict.c_str());
      info += buf;
    }
    for (int m : {2, 3}) {
      models.push_back(qk::grassmannian_model(m));
      const qk::ModelSpace& gr = models.back();
      const qk::QKDecomposition dec = qk::decompose(gr.R, gr.Q);
      qk::MuOptions opts;
      opts.restarts = 64;
      opts.seed = 11;
      opts.grid_density = m == 2 ? 262144 : 6000000;
      opts.sphere_density = m == 2 ? 512 : 2048;
      const qk::MuReport rep = qk::estimate_mu(dec, gr.Q, opts);
      const double gap = std::fabs(rep.grid_oracle_value - rep.mu_hat);
      ok = ok && rep.dichotomy_verdict == "kappa" &&
           std::fabs(rep.mu_hat - dec.kappa) < 1e-6 * dec.kappa && gap <= 1e-3;
      std::snprintf(buf, sizeof buf, "gr2c%d %.6f/%s grid-gap %.1e ", m, rep.mu_hat,
                    rep.dichotomy_verdict.c_str(), gap);
      info += buf;
      if (m == 2) {
        gr2_rep = rep;
        gr2_dec = dec;
        have_gr2_rep = true;
      }
    }
    const double secs = seconds_since(t0);
    std::snprintf(buf, sizeof buf, "%.1fs", secs);
    info += buf;
    report(6, "value dichotomy across the model spaces", ok && secs < 600.0, info);
  }

  // ---- 7: variational conditions at the reported maximizer ------------------
  {
    bool ok = false;
    std::string info = "report unavailable";
    if (have_gr2_rep) {
      try {
        const qk::ModelSpace& gr2 = models[2]; // gr2c with m = 2
        const qk::MaximizerConditions mc =
            qk::maximizer_conditions(gr2_dec, gr2.Q, gr2_rep, 1e-4);
        const double fo = std::max(std::max(mc.first_order_a, mc.first_order_b),
                                   std::max(mc.first_order_c, mc.first_order_d));
        ok = fo < 1e-6 && mc.bound_mu <= 1e-6 && mc.bound_kappa <= 1e-6 &&
             mc.key_lhs <= mc.key_rhs + 1e-8;
        char buf[128];
        std::snprintf(buf, sizeof buf, "first-order %.2e, bounds %.2e/%.2e, key %.6f<=%.6f",
                      fo, mc.bound_mu, mc.bound_kappa, mc.key_lhs, mc.key_rhs);
        info = buf;
      } catch (const std::exception& e) {
        info = std::string("exception: ") + e.what();
      }
    }
    report(7, "maximizer frame conditions", ok, info);
  }

  // ---- 8: curvature inequalities along random sweeps -------------------------
  {
    const auto t0 = Clock::now();
    double least = std::numeric_limits<double>::infinity();
    for (const qk::ModelSpace& model : models) {
      const auto [min1, min2] = qk::inequality_minima(model, 10000, 77);
      least = std::min(least, std::min(min1, min2));
    }
    const double secs = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "sweep minimum %.3e, %.1fs", least, secs);
    report(8, "nonnegativity sweeps", least >= -1e-9, buf);
  }

  // ---- 9: analytic gradient against finite differences ----------------------
  {
    const auto t0 = Clock::now();
    double worst = 0.0;
    const double h = 1e-5;
    for (const qk::ModelSpace& model : models) {
      const qk::QKDecomposition dec = qk::decompose(model.R, model.Q);
      const auto f = [&](const Eigen::Vector3d& s, const qk::Vector& X) {
        return dec.kappa - qk::phi(dec, model.Q, s[0], s[1], s[2], X);
      };
      qk::Rng rng(909);
      for (int i = 0; i < 100; ++i) {
        Eigen::Vector3d s;
        s << rng.normal(), rng.normal(), rng.normal();
        s.normalize();
        const qk::Vector X = rng.unit_vector(model.Q.dim());
        Eigen::Vector3d ds;
        ds << rng.normal(), rng.normal(), rng.normal();
        ds -= ds.dot(s) * s;
        ds.normalize();
        qk::Vector dX = rng.gaussian_vector(model.Q.dim());
        dX -= dX.dot(X) * X;
        dX.normalize();
        const auto [gs, gx] = qk::grad_f(dec, model.Q, s[0], s[1], s[2], X);
        const double analytic = gs.dot(ds) + gx.dot(dX);
        const double fd =
            (f((s + h * ds).normalized(), (X + h * dX).normalized()) -
             f((s - h * ds).normalized(), (X - h * dX).normalized())) /
            (2.0 * h);
        worst = std::max(worst, std::fabs(analytic - fd) / std::max(1.0, std::fabs(fd)));
      }
    }
    const double secs = seconds_since(t0);
    report(9, "gradient versus central differences", worst < 1e-6, detail(worst, secs));
  }

  // ---- 10: byte-identical command-line runs ----------------------------------
  {
    bool ok = false;
    std::string info;
    if (cli.empty()) {
      info = "command-line binary path not supplied";
    } else {
      namespace fs = std::filesystem;
      char tmpl[] = "/tmp/qk_accept_XXXXXX";
      char* dirc = ::mkdtemp(tmpl);
      if (dirc == nullptr) {
        info = "mkdtemp failed";
      } else {
        const fs::path dir(dirc);
        ok = true;
        auto twice = [&](const std::string& args, const std::string& tag,
                         const std::string& file_arg = "") {
          const fs::path oa = dir / (tag + "_a.out"), ob = dir / (tag + "_b.out");
          const fs::path fa = dir / (tag + "_a.json"), fb = dir / (tag + "_b.json");
          const std::string aa = file_arg.empty() ? args : args + " -o " + fa.string();
          const std::string ab = file_arg.empty() ? args : args + " -o " + fb.string();
          const int ra = run_cmd(cli, aa, oa.string());
          const int rb = run_cmd(cli, ab, ob.string());
          bool same = ra == 0 && rb == 0 && slurp(oa) == slurp(ob);
          if (!file_arg.empty()) same = same && !slurp(fa).empty() && slurp(fa) == slurp(fb);
          if (!same) info += tag + " differs or failed; ";
          ok = ok && same;
        };
        twice("mu --model gr2c 2 --restarts 4 --grid-density 2048 --sphere-density 32 "
              "--seed 3 --json",
              "mu");
        twice("verify --model hp 2 --seed 5 --json", "verify");
        twice("gen --m 2 --seed 7", "gen", "file");
        twice("model gr2c 2", "model", "file");
        std::error_code ec;
        fs::remove_all(dir, ec);
        if (ok) info = "four command pairs byte-identical";
      }
    }
    report(10, "deterministic command-line output", ok, info);
  }

  std::printf("%d/10 criteria passed\n", 10 - g_failures);
  return g_failures;
}
