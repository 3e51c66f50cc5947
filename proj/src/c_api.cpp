#include <hho/hho.h>

#include <exception>
#include <new>
#include <string>

#include <hho/checks.hpp>
#include <hho/error.hpp>

struct hho_mesh {
  hho::Mesh mesh;
};

struct hho_study {
  hho::RateTable table;
};

namespace {

thread_local std::string last_error;

hho_status status_of(hho::ErrorKind kind) {
  switch (kind) {
    case hho::ErrorKind::InvalidArgument: return HHO_ERR_INVALID_ARGUMENT;
    case hho::ErrorKind::Io: return HHO_ERR_IO;
    case hho::ErrorKind::Mesh: return HHO_ERR_MESH;
    case hho::ErrorKind::Numerical: return HHO_ERR_NUMERICAL;
    case hho::ErrorKind::InvalidProblem: return HHO_ERR_INVALID_PROBLEM;
  }
  return HHO_ERR_INTERNAL;
}

hho_status fail(hho_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
hho_status guarded(Fn&& fn) {
  try {
    fn();
    return HHO_OK;
  } catch (const hho::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HHO_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HHO_ERR_INTERNAL, e.what());
  }
}

#define HHO_REQUIRE(cond, what) \
  if (!(cond)) return fail(HHO_ERR_INVALID_ARGUMENT, what)

}  // namespace

extern "C" {

const char* hho_version(void) { return "0.1.0"; }

const char* hho_last_error(void) { return last_error.c_str(); }

const char* hho_status_string(hho_status status) {
  switch (status) {
    case HHO_OK: return "ok";
    case HHO_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HHO_ERR_IO: return "i/o error";
    case HHO_ERR_MESH: return "invalid mesh";
    case HHO_ERR_NUMERICAL: return "numerical failure";
    case HHO_ERR_INVALID_PROBLEM: return "invalid problem data";
    case HHO_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

hho_status hho_mesh_generate(const char* family, int level, hho_mesh** out) {
  HHO_REQUIRE(family && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new hho_mesh{hho::generate_mesh(std::string_view(family), level)}; });
}

hho_status hho_mesh_read(const char* path, hho_mesh** out) {
  HHO_REQUIRE(path && out, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new hho_mesh{hho::read_mesh(path)}; });
}

hho_status hho_mesh_write(const hho_mesh* mesh, const char* path) {
  HHO_REQUIRE(mesh && path, "null argument");
  return guarded([&] { hho::write_mesh(mesh->mesh, path); });
}

hho_status hho_mesh_counts(const hho_mesh* mesh, size_t* n_vertices, size_t* n_faces, size_t* n_cells) {
  HHO_REQUIRE(mesh, "null mesh");
  if (n_vertices) *n_vertices = mesh->mesh.n_vertices();
  if (n_faces) *n_faces = mesh->mesh.n_faces();
  if (n_cells) *n_cells = mesh->mesh.n_cells();
  return HHO_OK;
}

hho_status hho_mesh_diameter(const hho_mesh* mesh, double* h) {
  HHO_REQUIRE(mesh && h, "null argument");
  *h = mesh->mesh.max_diameter();
  return HHO_OK;
}

void hho_mesh_free(hho_mesh* mesh) { delete mesh; }

void hho_study_config_init(hho_study_config* config) {
  if (!config) return;
  *config = hho_study_config{"quasilinear", "cartesian", nullptr, 0, 0, 0, 1e-10, 25, HHO_WEIGHTS_CURRENT_ITERATE, nullptr};
}

hho_status hho_study_run(const hho_study_config* config, hho_study** out) {
  HHO_REQUIRE(config && out, "null argument");
  HHO_REQUIRE(config->problem, "problem not set");
  HHO_REQUIRE(config->n_degrees == 0 || config->degrees, "degrees pointer is null");
  HHO_REQUIRE(config->weight_policy == HHO_WEIGHTS_CURRENT_ITERATE || config->weight_policy == HHO_WEIGHTS_UPPER_BOUND,
              "unknown weight policy");
  *out = nullptr;
  return guarded([&] {
    hho::StudyConfig c;
    c.problem = hho::parse_problem(config->problem);
    if (config->mesh_path && *config->mesh_path) {
      c.mesh_path = config->mesh_path;
    } else {
      if (!config->family) throw hho::Error(hho::ErrorKind::InvalidArgument, "family not set");
      c.family = hho::parse_family(config->family);
    }
    c.degrees.assign(config->degrees, config->degrees + config->n_degrees);
    c.level_min = config->level_min;
    c.level_max = config->level_max;
    c.tol = config->tol;
    c.max_iter = config->max_iter;
    c.weights = config->weight_policy == HHO_WEIGHTS_UPPER_BOUND ? hho::WeightPolicy::UpperBound
                                                                 : hho::WeightPolicy::CurrentIterate;
    *out = new hho_study{hho::run_study(c)};
  });
}

size_t hho_study_size(const hho_study* study) { return study ? study->table.rows.size() : 0; }

hho_status hho_study_row_get(const hho_study* study, size_t index, hho_study_row* row) {
  HHO_REQUIRE(study && row, "null argument");
  HHO_REQUIRE(index < study->table.rows.size(), "row index out of range");
  const hho::RateRow& r = study->table.rows[index];
  *row = hho_study_row{r.family.c_str(), r.k, r.level, r.h, r.ndof, r.error, r.rate.value_or(0.), r.rate.has_value(),
                       r.iterations, r.converged};
  return HHO_OK;
}

hho_status hho_study_write_csv(const hho_study* study, const char* path) {
  HHO_REQUIRE(study && path, "null argument");
  return guarded([&] { hho::write_csv(study->table, path); });
}

hho_status hho_study_write_plotdata(const hho_study* study, const char* path) {
  HHO_REQUIRE(study && path, "null argument");
  return guarded([&] { hho::write_plotdata(study->table, path); });
}

void hho_study_free(hho_study* study) { delete study; }

hho_status hho_check_run(int suite, unsigned long long seed, hho_check_callback callback, void* user, size_t* n_checks,
                         size_t* n_failed) {
  HHO_REQUIRE(suite == HHO_SUITE_PROPERTIES || suite == HHO_SUITE_ACCEPTANCE, "unknown suite");
  return guarded([&] {
    hho::CheckCallback cb;
    if (callback) cb = [&](const hho::CheckResult& r) { callback(r.name.c_str(), r.passed, r.detail.c_str(), user); };
    const auto results = suite == HHO_SUITE_PROPERTIES ? hho::run_property_checks(seed, cb) : hho::run_acceptance(seed, cb);
    std::size_t failed = 0;
    for (const auto& r : results) failed += !r.passed;
    if (n_checks) *n_checks = results.size();
    if (n_failed) *n_failed = failed;
  });
}

}  // extern "C"
