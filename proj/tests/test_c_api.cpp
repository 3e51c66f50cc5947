#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <hho/hho.h>

namespace {

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

struct Tally {
  int total = 0;
  int failed = 0;
  std::vector<std::string> names;
};

void collect(const char* name, int passed, const char* detail, void* user) {
  auto* t = static_cast<Tally*>(user);
  ++t->total;
  t->failed += !passed;
  t->names.emplace_back(name);
  CHECK(detail != nullptr);
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::strcmp(hho_status_string(HHO_OK), "ok") == 0);
  for (int s = HHO_ERR_INVALID_ARGUMENT; s <= HHO_ERR_INTERNAL; ++s)
    CHECK(std::strlen(hho_status_string(static_cast<hho_status>(s))) > 0);
  CHECK(std::strcmp(hho_status_string(static_cast<hho_status>(99)), "unknown status") == 0);
  CHECK(std::strlen(hho_version()) > 0);
}

TEST_CASE("mesh handles") {
  hho_mesh* mesh = nullptr;
  REQUIRE(hho_mesh_generate("cartesian", 0, &mesh) == HHO_OK);
  size_t nv = 0, nf = 0, nc = 0;
  CHECK(hho_mesh_counts(mesh, &nv, &nf, &nc) == HHO_OK);
  CHECK(nv == 25);
  CHECK(nf == 40);
  CHECK(nc == 16);
  double h = 0.;
  CHECK(hho_mesh_diameter(mesh, &h) == HHO_OK);
  CHECK(h == doctest::Approx(std::sqrt(2.) / 4));

  CHECK(hho_mesh_write(mesh, "test_c_api.mesh") == HHO_OK);
  hho_mesh* back = nullptr;
  CHECK(hho_mesh_read("test_c_api.mesh", &back) == HHO_OK);
  size_t nc2 = 0;
  hho_mesh_counts(back, nullptr, nullptr, &nc2);
  CHECK(nc2 == 16);
  hho_mesh_free(back);
  hho_mesh_free(mesh);
  hho_mesh_free(nullptr);
  std::remove("test_c_api.mesh");
}

TEST_CASE("mesh errors map to status codes") {
  hho_mesh* mesh = reinterpret_cast<hho_mesh*>(0x1);
  CHECK(hho_mesh_generate("pentagonal", 0, &mesh) == HHO_ERR_INVALID_ARGUMENT);
  CHECK(mesh == nullptr);
  CHECK(std::string(hho_last_error()).find("pentagonal") != std::string::npos);
  CHECK(hho_mesh_generate("cartesian", -2, &mesh) == HHO_ERR_INVALID_ARGUMENT);
  CHECK(hho_mesh_generate(nullptr, 0, &mesh) == HHO_ERR_INVALID_ARGUMENT);
  CHECK(hho_mesh_read("missing.mesh", &mesh) == HHO_ERR_IO);
  CHECK(std::string(hho_last_error()).find("missing.mesh") != std::string::npos);

  {
    std::ofstream bad("test_c_api_bad.mesh");
    bad << "3 3 1\n0 0\n1 0\n0 1\n0 1 1\n1 9 1\n2 0 1\n3 0 1 2\n";
  }
  CHECK(hho_mesh_read("test_c_api_bad.mesh", &mesh) == HHO_ERR_MESH);
  std::remove("test_c_api_bad.mesh");
  CHECK(hho_mesh_counts(nullptr, nullptr, nullptr, nullptr) == HHO_ERR_INVALID_ARGUMENT);
}

TEST_CASE("convergence study through the C interface") {
  hho_study_config cfg;
  hho_study_config_init(&cfg);
  CHECK(std::strcmp(cfg.problem, "quasilinear") == 0);
  CHECK(cfg.tol == 1e-10);
  const int degrees[] = {0, 1};
  cfg.degrees = degrees;
  cfg.n_degrees = 2;
  cfg.family = "hexagonal";
  cfg.level_min = 1;
  cfg.level_max = 2;

  hho_study* study = nullptr;
  REQUIRE(hho_study_run(&cfg, &study) == HHO_OK);
  REQUIRE(hho_study_size(study) == 4);
  hho_study_row r;
  CHECK(hho_study_row_get(study, 0, &r) == HHO_OK);
  CHECK(std::strcmp(r.family, "hexagonal") == 0);
  CHECK(r.k == 0);
  CHECK(r.level == 1);
  CHECK_FALSE(r.has_rate);
  CHECK(r.converged);
  CHECK(r.iterations > 1);
  CHECK(hho_study_row_get(study, 3, &r) == HHO_OK);
  CHECK(r.k == 1);
  CHECK(r.has_rate);
  CHECK(r.rate > 1.5);
  CHECK(hho_study_row_get(study, 4, &r) == HHO_ERR_INVALID_ARGUMENT);

  CHECK(hho_study_write_csv(study, "test_c_api.csv") == HHO_OK);
  CHECK(hho_study_write_plotdata(study, "test_c_api.dat") == HHO_OK);
  const std::string csv = slurp("test_c_api.csv");
  CHECK(csv.rfind("family,k,level,h,ndof,error,rate\nhexagonal,0,1,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
  CHECK(slurp("test_c_api.dat").rfind("# family=hexagonal k=0\n", 0) == 0);
  CHECK(hho_study_write_csv(study, "no_such_dir/x.csv") == HHO_ERR_IO);
  std::remove("test_c_api.csv");
  std::remove("test_c_api.dat");
  hho_study_free(study);
  hho_study_free(nullptr);
  CHECK(hho_study_size(nullptr) == 0);
}

TEST_CASE("study configuration errors") {
  hho_study_config cfg;
  hho_study_config_init(&cfg);
  const int k = 0;
  cfg.degrees = &k;
  cfg.n_degrees = 1;
  hho_study* study = nullptr;

  cfg.problem = "stokes";
  CHECK(hho_study_run(&cfg, &study) == HHO_ERR_INVALID_ARGUMENT);
  cfg.problem = "poisson";
  cfg.family = "voronoi";
  CHECK(hho_study_run(&cfg, &study) == HHO_ERR_INVALID_ARGUMENT);
  cfg.family = "cartesian";
  cfg.level_min = 2;
  cfg.level_max = 1;
  CHECK(hho_study_run(&cfg, &study) == HHO_ERR_INVALID_ARGUMENT);
  cfg.level_min = 0;
  cfg.level_max = 0;
  cfg.weight_policy = 7;
  CHECK(hho_study_run(&cfg, &study) == HHO_ERR_INVALID_ARGUMENT);
  cfg.weight_policy = HHO_WEIGHTS_UPPER_BOUND;
  cfg.mesh_path = "missing.mesh";
  CHECK(hho_study_run(&cfg, &study) == HHO_ERR_IO);
  cfg.mesh_path = "";
  cfg.degrees = nullptr;
  CHECK(hho_study_run(&cfg, &study) == HHO_ERR_INVALID_ARGUMENT);
  cfg.degrees = &k;
  CHECK(hho_study_run(nullptr, &study) == HHO_ERR_INVALID_ARGUMENT);
  CHECK(study == nullptr);

  // Iteration limit reached: a row that did not converge is still reported.
  cfg.problem = "quasilinear";
  cfg.max_iter = 1;
  cfg.level_max = 1;
  REQUIRE(hho_study_run(&cfg, &study) == HHO_OK);
  hho_study_row r;
  hho_study_row_get(study, 0, &r);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 1);
  hho_study_free(study);
}

TEST_CASE("property suite through the C interface") {
  Tally t;
  size_t n = 0, failed = 0;
  REQUIRE(hho_check_run(HHO_SUITE_PROPERTIES, 20240607ULL, collect, &t, &n, &failed) == HHO_OK);
  CHECK(n == static_cast<size_t>(t.total));
  CHECK(failed == static_cast<size_t>(t.failed));
  CHECK(failed == 0);
  CHECK(n > 10);
  CHECK(hho_check_run(5, 1, nullptr, nullptr, &n, &failed) == HHO_ERR_INVALID_ARGUMENT);
}
