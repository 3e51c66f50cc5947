// Command-line front end over the C API.
//
//   hho solve --problem P --family F --degree K --levels A..B --tol T --out PATH [--mesh FILE]
//   hho check [--acceptance] [--seed N]
//   hho mesh --family F --level L --out PATH
//
// Exit status: 0 success, 2 tolerance or acceptance failure, 1 error.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include <hho/hho.h>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_error = 1;
constexpr int exit_failure = 2;

int report(hho_status status) {
  std::fprintf(stderr, "hho: %s: %s\n", hho_status_string(status), hho_last_error());
  return exit_error;
}

bool parse_int(std::string_view s, int& out) {
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && end == s.data() + s.size();
}

// "A..B" or "A".
bool parse_range(std::string_view s, int& lo, int& hi) {
  const auto dots = s.find("..");
  if (dots == std::string_view::npos) {
    if (!parse_int(s, lo)) return false;
    hi = lo;
    return true;
  }
  return parse_int(s.substr(0, dots), lo) && parse_int(s.substr(dots + 2), hi);
}

// "K", "A..B" or a comma list of either.
bool parse_degrees(std::string_view s, std::vector<int>& out) {
  while (!s.empty()) {
    const auto comma = s.find(',');
    int lo = 0, hi = 0;
    if (!parse_range(s.substr(0, comma), lo, hi) || hi < lo) return false;
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    s = comma == std::string_view::npos ? std::string_view{} : s.substr(comma + 1);
  }
  return !out.empty();
}

std::string default_plot_path(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0)
    return out.substr(0, out.size() - suffix.size()) + ".plot.dat";
  return out + ".plot.dat";
}

struct SolveArgs {
  std::string problem;
  std::string family;
  std::string degrees = "0";
  std::string levels = "0..3";
  double tol = 1e-10;
  int max_iter = 25;
  std::string weights = "iterate";
  std::string out;
  std::string plot;
  std::string mesh;
  bool check_rates = false;
  double rate_tol = 0.25;
};

int run_solve(const SolveArgs& a) {
  std::vector<int> degrees;
  if (!parse_degrees(a.degrees, degrees)) {
    std::fprintf(stderr, "hho: bad --degree '%s'\n", a.degrees.c_str());
    return exit_error;
  }
  hho_study_config cfg;
  hho_study_config_init(&cfg);
  if (!parse_range(a.levels, cfg.level_min, cfg.level_max)) {
    std::fprintf(stderr, "hho: bad --levels '%s' (expected A..B)\n", a.levels.c_str());
    return exit_error;
  }
  if (a.mesh.empty() && a.family.empty()) {
    std::fprintf(stderr, "hho: --family is required unless --mesh is given\n");
    return exit_error;
  }
  cfg.problem = a.problem.c_str();
  cfg.family = a.family.empty() ? nullptr : a.family.c_str();
  cfg.degrees = degrees.data();
  cfg.n_degrees = degrees.size();
  cfg.tol = a.tol;
  cfg.max_iter = a.max_iter;
  cfg.weight_policy = a.weights == "upper" ? HHO_WEIGHTS_UPPER_BOUND : HHO_WEIGHTS_CURRENT_ITERATE;
  cfg.mesh_path = a.mesh.empty() ? nullptr : a.mesh.c_str();

  hho_study* study = nullptr;
  if (hho_status s = hho_study_run(&cfg, &study); s != HHO_OK) return report(s);

  int status = exit_ok;
  const bool quasilinear = a.problem == "quasilinear";
  std::printf("%-10s %2s %5s %12s %8s %12s %7s%s\n", "family", "k", "level", "h", "ndof", "error", "rate",
              quasilinear ? "  iterations" : "");
  const size_t n = hho_study_size(study);
  for (size_t i = 0; i < n; ++i) {
    hho_study_row r;
    hho_study_row_get(study, i, &r);
    char rate[16] = "";
    if (r.has_rate) std::snprintf(rate, sizeof rate, "%.3f", r.rate);
    std::printf("%-10s %2d %5d %12.5e %8zu %12.5e %7s", r.family, r.k, r.level, r.h, r.ndof, r.error, rate);
    if (quasilinear) std::printf("  %d%s", r.iterations, r.converged ? "" : " (not converged)");
    std::printf("\n");
    if (!r.converged) status = exit_failure;
    const bool last_of_group = i + 1 == n || [&] {
      hho_study_row next;
      hho_study_row_get(study, i + 1, &next);
      return next.k != r.k;
    }();
    if (a.check_rates && a.problem != "poisson" && last_of_group &&
        (!r.has_rate || std::abs(r.rate - (r.k + 1)) > a.rate_tol)) {
      std::fprintf(stderr, "hho: k=%d final rate outside %d +- %g\n", r.k, r.k + 1, a.rate_tol);
      status = exit_failure;
    }
  }

  hho_status s = hho_study_write_csv(study, a.out.c_str());
  if (s == HHO_OK) s = hho_study_write_plotdata(study, (a.plot.empty() ? default_plot_path(a.out) : a.plot).c_str());
  hho_study_free(study);
  if (s != HHO_OK) return report(s);
  if (status == exit_failure) std::fprintf(stderr, "hho: tolerance not met\n");
  return status;
}

int run_check(bool acceptance, unsigned long long seed) {
  size_t total = 0, failed = 0;
  auto print = [](const char* name, int passed, const char* detail, void*) {
    std::printf("%s  %s  [%s]\n", passed ? "PASS" : "FAIL", name, detail);
    std::fflush(stdout);
  };
  if (hho_status s = hho_check_run(acceptance ? HHO_SUITE_ACCEPTANCE : HHO_SUITE_PROPERTIES, seed, print, nullptr, &total, &failed);
      s != HHO_OK)
    return report(s);
  std::printf("%zu of %zu checks failed\n", failed, total);
  return failed ? exit_failure : exit_ok;
}

int run_mesh(const std::string& family, int level, const std::string& out) {
  hho_mesh* mesh = nullptr;
  if (hho_status s = hho_mesh_generate(family.c_str(), level, &mesh); s != HHO_OK) return report(s);
  size_t nv = 0, nf = 0, nc = 0;
  hho_mesh_counts(mesh, &nv, &nf, &nc);
  const hho_status s = hho_mesh_write(mesh, out.c_str());
  hho_mesh_free(mesh);
  if (s != HHO_OK) return report(s);
  std::printf("%zu vertices, %zu faces, %zu cells\n", nv, nf, nc);
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid high-order solver for linear and quasilinear elliptic problems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", hho_version());

  SolveArgs solve;
  auto* sc = app.add_subcommand("solve", "Run a convergence study and write CSV and plot data");
  sc->add_option("--problem", solve.problem, "Manufactured problem")
      ->required()
      ->check(CLI::IsMember({"poisson", "nonselfadjoint", "quasilinear"}));
  sc->add_option("--family", solve.family, "Mesh family")->check(CLI::IsMember({"triangular", "cartesian", "kershaw", "hexagonal"}));
  sc->add_option("--degree", solve.degrees, "Polynomial degree(s): K, A..B or a comma list")->capture_default_str();
  sc->add_option("--levels", solve.levels, "Refinement levels A..B")->capture_default_str();
  sc->add_option("--tol", solve.tol, "Stopping tolerance of the nonlinear iteration")->capture_default_str();
  sc->add_option("--max-iter", solve.max_iter, "Iteration limit")->capture_default_str();
  sc->add_option("--weights", solve.weights, "Stabilization weights: iterate or upper")
      ->check(CLI::IsMember({"iterate", "upper"}))
      ->capture_default_str();
  sc->add_option("--out", solve.out, "CSV output path")->required();
  sc->add_option("--plot", solve.plot, "Plot data path (default derived from --out)");
  sc->add_option("--mesh", solve.mesh, "Solve on this mesh file instead of a generated family");
  sc->add_flag("--check-rates", solve.check_rates, "Exit with status 2 unless each final rate is within --rate-tol of k+1");
  sc->add_option("--rate-tol", solve.rate_tol, "Rate tolerance for --check-rates")->capture_default_str();

  bool acceptance = false;
  unsigned long long seed = 20240607;
  auto* cc = app.add_subcommand("check", "Run the property suites");
  cc->add_flag("--acceptance", acceptance, "Run the acceptance criteria instead");
  cc->add_option("--seed", seed, "Seed for randomized checks")->capture_default_str();

  std::string mesh_family, mesh_out;
  int mesh_level = 0;
  auto* mc = app.add_subcommand("mesh", "Write a generated mesh in the text format");
  mc->add_option("--family", mesh_family, "Mesh family")->required();
  mc->add_option("--level", mesh_level, "Refinement level")->capture_default_str();
  mc->add_option("--out", mesh_out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_error;
  }

  if (sc->parsed()) return run_solve(solve);
  if (cc->parsed()) return run_check(acceptance, seed);
  return run_mesh(mesh_family, mesh_level, mesh_out);
}
