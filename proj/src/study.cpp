#include <hho/study.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <hho/error.hpp>

namespace hho {

namespace {

constexpr std::string_view csv_header = "family,k,level,h,ndof,error,rate";
constexpr double pi = std::numbers::pi;

}  // namespace

ProblemKind parse_problem(std::string_view name) {
  if (name == "poisson") return ProblemKind::Poisson;
  if (name == "nonselfadjoint") return ProblemKind::Nonselfadjoint;
  if (name == "quasilinear") return ProblemKind::Quasilinear;
  throw Error(ErrorKind::InvalidArgument, "unknown problem '" + std::string(name) + "'");
}

std::string_view problem_name(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::Poisson: return "poisson";
    case ProblemKind::Nonselfadjoint: return "nonselfadjoint";
    case ProblemKind::Quasilinear: return "quasilinear";
  }
  return "?";
}

//------------------------------------------------------------------------------
// Registry
//------------------------------------------------------------------------------

ManufacturedSolution manufactured_solution(std::string_view name) {
  if (name == "bubble") {
    return {[](const Point& p) { return p.x() * (1 - p.x()) * p.y() * (1 - p.y()); },
            [](const Point& p) {
              return Point((1 - 2 * p.x()) * p.y() * (1 - p.y()), p.x() * (1 - p.x()) * (1 - 2 * p.y()));
            },
            [](const Point& p) { return -2 * p.y() * (1 - p.y()) - 2 * p.x() * (1 - p.x()); }};
  }
  if (name == "sine") {
    return {[](const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); },
            [](const Point& p) {
              return Point(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()), pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
            },
            [](const Point& p) { return -2 * pi * pi * std::sin(pi * p.x()) * std::sin(pi * p.y()); }};
  }
  if (name == "zero") {
    return {[](const Point&) { return 0.; }, [](const Point&) { return Point(0., 0.); }, [](const Point&) { return 0.; }};
  }
  if (name.starts_with("poly")) {
    int d = -1;
    const auto digits = name.substr(4);
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
    if (ec == std::errc() && end == digits.data() + digits.size() && d >= 0 && d <= 8) {
      // (1 + x + 2y)^d
      return {[d](const Point& p) { return std::pow(1 + p.x() + 2 * p.y(), d); },
              [d](const Point& p) {
                const double g = d == 0 ? 0. : d * std::pow(1 + p.x() + 2 * p.y(), d - 1);
                return Point(g, 2 * g);
              },
              [d](const Point& p) { return d < 2 ? 0. : 5. * d * (d - 1) * std::pow(1 + p.x() + 2 * p.y(), d - 2); }};
    }
  }
  throw Error(ErrorKind::InvalidArgument, "unknown manufactured solution '" + std::string(name) + "'");
}

ScalarFunction manufactured_rhs(const ManufacturedSolution& s, const LinearCoefficients& c) {
  if (!c.a || !c.grad_a) throw Error(ErrorKind::InvalidProblem, "diffusion coefficient and its gradient are required");
  return [s, c](const Point& x) {
    const Point du = s.grad(x);
    double p = -(c.a(x) * s.laplacian(x) + c.grad_a(x).dot(du));
    if (c.b) p += c.b(x).dot(du);
    if (c.a0) p += c.a0(x) * s.u(x);
    return p;
  };
}

ScalarFunction manufactured_rhs(const ManufacturedSolution& s, const QuasilinearCoefficients& c) {
  if (!c.a || !c.a_u) throw Error(ErrorKind::InvalidProblem, "coefficient a and a_u are required");
  // div(a(x, u) grad u) = a lap u + (grad_x a + a_u grad u) . grad u
  return [s, c](const Point& x) {
    const double u = s.u(x);
    const Point du = s.grad(x);
    Point ga = c.a_u(x, u) * du;
    if (c.grad_x) ga += c.grad_x(x, u);
    return -(c.a(x, u) * s.laplacian(x) + ga.dot(du));
  };
}

LinearProblemData ManufacturedProblem::linear_data() const {
  return {linear.a, linear.b, linear.a0, manufactured_rhs(solution, linear)};
}

QuasilinearProblemData ManufacturedProblem::quasilinear_data() const {
  QuasilinearProblemData d;
  d.a = quasi.a;
  d.a_u = quasi.a_u;
  d.f = manufactured_rhs(solution, quasi);
  d.alpha = quasi.alpha;
  d.upper = quasi.upper;
  d.u_exact = solution.u;
  d.grad_u_exact = solution.grad;
  return d;
}

ManufacturedProblem manufactured_problem(ProblemKind kind, int k) {
  ManufacturedProblem mp{kind, {}, {}, {}, false};
  switch (kind) {
    case ProblemKind::Quasilinear:
      mp.solution = manufactured_solution("bubble");
      // u takes values in [0, 1/16], so a(u) = 1 + u stays well inside [1/2, 3/2].
      mp.quasi.a = [](const Point&, double t) { return 1. + t; };
      mp.quasi.a_u = [](const Point&, double) { return 1.; };
      mp.quasi.alpha = 0.5;
      mp.quasi.upper = 1.5;
      break;
    case ProblemKind::Nonselfadjoint:
      mp.solution = manufactured_solution("sine");
      mp.linear.a = [](const Point& x) { return 1. + x.x(); };
      mp.linear.grad_a = [](const Point&) { return Point(1., 0.); };
      mp.linear.b = [](const Point&) { return Point(1., 1.); };
      mp.linear.a0 = [](const Point&) { return 1.; };
      break;
    case ProblemKind::Poisson:
      if (k < 0 || k > 7) throw Error(ErrorKind::InvalidArgument, "degree out of range for the poisson probe");
      mp.solution = manufactured_solution("poly" + std::to_string(k + 1));
      mp.linear.a = [](const Point&) { return 1.; };
      mp.linear.grad_a = [](const Point&) { return Point(0., 0.); };
      mp.lift_boundary = true;
      break;
  }
  return mp;
}

//------------------------------------------------------------------------------
// Study
//------------------------------------------------------------------------------

void StudyConfig::validate() const {
  if (degrees.empty()) throw Error(ErrorKind::InvalidArgument, "no degrees given");
  for (int k : degrees)
    if (k < 0 || k > 3) throw Error(ErrorKind::InvalidArgument, "degree " + std::to_string(k) + " outside 0..3");
  if (mesh_path.empty() && (level_min < 0 || level_max < level_min))
    throw Error(ErrorKind::InvalidArgument, "levels must be a nonempty ascending range of nonnegative integers");
  if (!(tol > 0.)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");
}

RateRow solve_row(const StudyConfig& config, const Mesh& mesh, int k, int level, std::string_view family_label) {
  const Discretization disc(mesh, k, config.quad_degree);
  const ManufacturedProblem mp = manufactured_problem(config.problem, k);

  RateRow row;
  row.family = family_label;
  row.k = k;
  row.level = level;
  row.h = mesh.max_diameter();
  row.ndof = disc.condensed_dofs();

  HybridVector uh;
  if (config.problem == ProblemKind::Quasilinear) {
    IterationOptions options;
    options.tol = config.tol;
    options.max_iter = config.max_iter;
    options.weights = config.weights;
    QuasilinearSolution sol = fixed_point_solve(disc, mp.quasilinear_data(), options);
    row.iterations = sol.report.iterations;
    row.converged = sol.report.converged;
    row.increments = sol.report.increments;
    uh = std::move(sol.u);
  } else {
    if (mp.lift_boundary) {
      const HybridVector boundary = interpolate(disc, mp.solution.u);
      uh = solve_linear_problem(disc, mp.linear_data(), &boundary);
    } else {
      uh = solve_linear_problem(disc, mp.linear_data());
    }
  }
  row.error = reconstructed_gradient_error(disc, mp.solution.grad, uh).relative;
  return row;
}

RateTable run_study(const StudyConfig& config) {
  config.validate();
  RateTable table;
  const std::string label = config.mesh_path.empty() ? std::string(family_name(config.family)) : "file";
  std::optional<Mesh> file_mesh;
  if (!config.mesh_path.empty()) file_mesh = read_mesh(config.mesh_path);

  for (int k : config.degrees) {
    const int lo = file_mesh ? 0 : config.level_min;
    const int hi = file_mesh ? 0 : config.level_max;
    for (int level = lo; level <= hi; ++level) {
      try {
        if (file_mesh) {
          table.rows.push_back(solve_row(config, *file_mesh, k, level, label));
        } else {
          const Mesh mesh = generate_mesh(config.family, level);
          table.rows.push_back(solve_row(config, mesh, k, level, label));
        }
      } catch (const Error& e) {
        std::ostringstream msg;
        msg << "family " << label << ", k = " << k << ", level " << level << ": " << e.what();
        throw Error(e.kind(), msg.str());
      }
    }
  }
  compute_rates(table);
  return table;
}

void compute_rates(RateTable& table) {
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    RateRow& r = table.rows[i];
    r.rate.reset();
    if (i == 0) continue;
    const RateRow& prev = table.rows[i - 1];
    if (prev.family != r.family || prev.k != r.k || prev.level + 1 != r.level) continue;
    const double rate = std::log(r.error / prev.error) / std::log(r.h / prev.h);
    if (std::isfinite(rate)) r.rate = rate;
  }
}

//------------------------------------------------------------------------------
// Output
//------------------------------------------------------------------------------

std::string format_double(double value) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error(ErrorKind::InvalidArgument, "cannot format number");
  return std::string(buf, end);
}

std::string format_csv(const RateTable& table) {
  std::string out(csv_header);
  out += '\n';
  for (const RateRow& r : table.rows) {
    out += r.family + ',' + std::to_string(r.k) + ',' + std::to_string(r.level) + ',' + format_double(r.h) + ',' +
           std::to_string(r.ndof) + ',' + format_double(r.error) + ',';
    if (r.rate) out += format_double(*r.rate);
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    parts.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || end != field.data() + field.size())
    throw Error(ErrorKind::InvalidArgument, "csv line " + std::to_string(line_no) + ": bad field '" + std::string(field) + "'");
  return value;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  out << text;
  if (!out.flush()) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

}  // namespace

RateTable parse_csv(std::string_view text) {
  RateTable table;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != csv_header) throw Error(ErrorKind::InvalidArgument, "csv header must be '" + std::string(csv_header) + "'");
      continue;
    }
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 7) throw Error(ErrorKind::InvalidArgument, "csv line " + std::to_string(line_no) + ": expected 7 fields");
    RateRow r;
    r.family = std::string(f[0]);
    r.k = parse_field<int>(f[1], line_no);
    r.level = parse_field<int>(f[2], line_no);
    r.h = parse_field<double>(f[3], line_no);
    r.ndof = parse_field<std::size_t>(f[4], line_no);
    r.error = parse_field<double>(f[5], line_no);
    if (!f[6].empty()) r.rate = parse_field<double>(f[6], line_no);
    table.rows.push_back(std::move(r));
  }
  if (line_no == 0) throw Error(ErrorKind::InvalidArgument, "empty csv");
  return table;
}

void write_csv(const RateTable& table, const std::string& path) { write_file(path, format_csv(table)); }

std::string format_plotdata(const RateTable& table) {
  std::string out;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const RateRow& r = table.rows[i];
    const bool new_block = i == 0 || table.rows[i - 1].family != r.family || table.rows[i - 1].k != r.k;
    if (new_block) {
      if (i != 0) out += "\n\n";
      out += "# family=" + r.family + " k=" + std::to_string(r.k) + "\nlog10_h log10_error\n";
    }
    out += format_double(std::log10(r.h)) + ' ' + format_double(std::log10(r.error)) + '\n';
  }
  return out;
}

void write_plotdata(const RateTable& table, const std::string& path) { write_file(path, format_plotdata(table)); }

}  // namespace hho
