#include <doctest.h>

#include <array>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "vmfem/config.hpp"
#include "vmfem/driver.hpp"
#include "vmfem/output.hpp"

using namespace vmfem;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("vmfem_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int parse_error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return -1;
}

struct VtkFile {
  std::vector<Point> points;
  std::vector<std::array<int, 3>> cells;
  std::map<std::string, std::vector<double>> data;
};

VtkFile read_vtk(std::istream& in) {
  VtkFile f;
  std::string line, word;
  std::getline(in, line);
  REQUIRE(line == "# vtk DataFile Version 3.0");
  std::getline(in, line); // title
  std::getline(in, line);
  REQUIRE(line == "ASCII");
  while (in >> word) {
    if (word == "POINTS") {
      std::size_t n;
      in >> n >> word;
      f.points.resize(n);
      for (auto& p : f.points) {
        std::string x, y, z;
        in >> x >> y >> z;
        p = Point(std::strtod(x.c_str(), nullptr), std::strtod(y.c_str(), nullptr));
      }
    } else if (word == "CELLS") {
      std::size_t n, total;
      in >> n >> total;
      f.cells.resize(n);
      for (auto& c : f.cells) {
        int three;
        in >> three >> c[0] >> c[1] >> c[2];
        CHECK(three == 3);
      }
    } else if (word == "CELL_TYPES") {
      std::size_t n;
      in >> n;
      for (std::size_t i = 0; i < n; ++i) {
        int t;
        in >> t;
        CHECK(t == 5);
      }
    } else if (word == "SCALARS") {
      std::string name, type, lut, def;
      int comps;
      in >> name >> type >> comps >> lut >> def;
      auto& v = f.data[name];
      v.resize(f.points.size());
      for (auto& d : v) in >> d;
    }
  }
  return f;
}

} // namespace

TEST_CASE("defaults from a lone case section") {
  const RunConfig mms = parse_config("[mms]\n");
  CHECK(mms == default_config(CaseKind::Mms));
  CHECK(mms.fluid.model == ViscosityModel::ConstantNu);
  CHECK(mms.fluid.nu == 3.0);
  CHECK(mms.fluid.kappa == 0.47);
  CHECK(mms.fluid.cv == 1.0);
  CHECK(mms.fluid.gas_constant == 1.0);
  CHECK(mms.dt == 5e-4);
  CHECK(mms.t_final == 0.25);
  CHECK(mms.domain.x1 == 1.25);
  CHECK(mms.flux.zeta == 0.5);
  CHECK(mms.flux.delta == 0.5);
  CHECK(mms.flux.eta == 18.0);
  CHECK(mms.flux.epsilon == 18.0);
  CHECK(mms.flux.c_mod == 0.0);

  const RunConfig ap = parse_config("# comment\n[ap]\n");
  CHECK(ap == default_config(CaseKind::Ap));
  CHECK(ap.mach == std::vector<double>{0.1, 0.05, 0.025});
  CHECK(parse_config("[run]\ncase = custom\n") == default_config(CaseKind::Custom));
}

TEST_CASE("flux constants follow k while auto") {
  const RunConfig c = parse_config("[run]\ncase = mms\nk = 2\n[flux]\neta = auto\n");
  CHECK(c.flux.eta == 36.0);
  CHECK(c.flux.epsilon == 36.0);
  const RunConfig d = parse_config("[run]\ncase = mms\nk = 2\n[flux]\neta = 7.5\n");
  CHECK(d.flux.eta == 7.5);
  CHECK(!d.eta_auto);
  CHECK(d.flux.epsilon == 36.0);
}

TEST_CASE("strict parsing reports line numbers") {
  CHECK(parse_error_line("[run]\ncase = mms\nk = 0\n") == 3);
  CHECK(parse_error_line("[run]\ncase = mms\n\n[flux]\nzeta = 0.5\nbogus = 1\n") == 6);
  CHECK(parse_error_line("[run]\ncase = mms\n[extras]\n") == 3);
  CHECK(parse_error_line("[run]\ncase = mms\ndt = fast\n") == 3);
  CHECK(parse_error_line("[run]\ncase = mms\ndt = 1e-3\ndt = 2e-3\n") == 4);
  CHECK(parse_error_line("[run]\ncase = pipe\n") == 2);
  CHECK(parse_error_line("[run]\nk = 1\n") == 1);
  CHECK(parse_error_line("[run]\ncase = mms\n[newton]\nreuse_jacobian = maybe\n") == 4);
  CHECK(parse_error_line("[mms]\nlevels = 2\n[ap]\n") == 3);
  CHECK(parse_error_line("case = mms\n") == 1);
  CHECK(parse_error_line("[run\ncase = mms\n") == 1);
  CHECK(parse_error_line("[run]\ncase = mms\ndt = 0.5\nt_final = 0.1\n") > 0);
  CHECK(parse_error_line("[run]\ncase = mms\n[fluid]\nviscosity = honey\n") == 4);
  CHECK(parse_error_line("[run]\ncase = custom\n[mesh]\nfile = /nonexistent/mesh.txt\n") == 4);
}

TEST_CASE("configuration round trip") {
  for (CaseKind k : {CaseKind::Mms, CaseKind::Ap, CaseKind::Custom}) {
    const RunConfig c = default_config(k);
    CHECK(parse_config(config_to_string(c)) == c);
  }
  RunConfig c = default_config(CaseKind::Custom);
  c.k = 2;
  c.flux = FluxParams::defaults(2);
  c.flux.eta = 0.1 + 0.2; // not exactly representable in short decimal
  c.eta_auto = false;
  c.dt = 1.0 / 3.0 * 1e-3;
  c.t_final = 1e-2;
  c.fluid.kappa = 0.0123;
  c.newton.reuse_jacobian = true;
  c.mach = {0.3, 0.15};
  c.walls = false;
  c.snapshot_every = 4;
  c.output_dir = "results/run one";
  const RunConfig r = parse_config(config_to_string(c));
  CHECK(r == c);
  CHECK(r.flux.eta == 0.1 + 0.2);
}

TEST_CASE("study options from a configuration") {
  RunConfig c = parse_config("[run]\ncase = mms\nk = 2\ndt = 1e-3\n[mms]\nexact_history = true\n");
  const MmsRunOptions o = mms_options(c);
  CHECK(o.k == 2);
  CHECK(o.params.dt == 1e-3);
  CHECK(o.params.nu == 3.0);
  CHECK(o.exact_history);
  CHECK(o.flux->eta == 36.0);
  c.fluid.model = ViscosityModel::Sutherland;
  CHECK_THROWS_AS(mms_options(c), InvalidArgument);

  const ApParameters a = ap_parameters(parse_config("[ap]\nmach = 0.2, 0.1\n[mesh]\nnx = 6\nny = 6\n"));
  CHECK(a.n == 6);
  CHECK(a.mach == std::vector<double>{0.2, 0.1});
  CHECK(a.mu == 0.01);
  CHECK_THROWS_AS(ap_parameters(parse_config("[ap]\n[mesh]\nnx = 6\nny = 5\n")), InvalidArgument);
}

TEST_CASE("CSV reports") {
  std::vector<MmsLevelResult> lv(2);
  lv[0] = MmsLevelResult{4, 0.5, 212, 1e-3, 1e-2, 2e-2};
  lv[1] = MmsLevelResult{8, 0.25, 740, 1.25e-4, 2.5e-3, 5e-3};
  std::ostringstream out;
  write_convergence_csv(out, make_report(1, lv));
  std::istringstream in(out.str());
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "k,h,dofs,err_u,ord_u,err_rho,ord_rho,err_T,ord_T");
  CHECK(first == "1,0.5,212,0.001,,0.01,,0.02,");
  CHECK(second == "1,0.25,740,0.000125,3,0.0025,2,0.005,2");

  ApReport ap;
  ap.rows.push_back(ApRow{0.1, 1e-3, 2e-3});
  std::ostringstream a;
  write_ap_csv(a, ap);
  CHECK(a.str() == "Ma,diff_p,diff_rho\n0.1,0.001,0.002\n");
}

TEST_CASE("VTK output") {
  // two triangles sharing one vertex
  std::istringstream bowtie("vmfem-mesh 1\n5\n0 0\n1 0\n0.5 0.5\n1 1\n0 1\n2\n0 1 2\n2 3 4\n");
  auto mesh = std::make_shared<const Mesh>(read_mesh(bowtie));
  const TaylorHoodSpaces sp = build_taylor_hood(mesh, 1);
  const StateLayout l = StateLayout::of(sp);
  Eigen::VectorXd x(l.size());
  x.segment(0, l.scalar).setConstant(1.2);
  x.segment(l.offset_u(), l.velocity) =
      interpolate(sp.velocity, VectorFunction([](const Point&) { return Eigen::Vector2d(3.0, 4.0); }));
  x.segment(l.offset_T(), l.scalar).setConstant(300.0);

  std::stringstream out;
  write_vtk(out, sp, l, x);
  const VtkFile f = read_vtk(out);
  REQUIRE(f.points.size() == 5);
  CHECK(f.cells.size() == 2);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(f.points[i].x() == mesh->vertices()[i].x());
    CHECK(f.points[i].y() == mesh->vertices()[i].y());
    CHECK(f.data.at("rho")[i] == doctest::Approx(1.2).epsilon(1e-14));
    CHECK(f.data.at("T")[i] == doctest::Approx(300.0).epsilon(1e-14));
    CHECK(f.data.at("u_magnitude")[i] == doctest::Approx(5.0).epsilon(1e-14));
  }

  SUBCASE("coordinates are written bitwise") {
    auto m = std::make_shared<const Mesh>(generate_structured(3, 3, Rectangle{0.1, 0.7, -1.0 / 3.0, 2.0 / 7.0}));
    const TaylorHoodSpaces s = build_taylor_hood(m, 1);
    const StateLayout ll = StateLayout::of(s);
    Eigen::VectorXd y = Eigen::VectorXd::Ones(ll.size());
    std::stringstream o;
    write_vtk(o, s, ll, y);
    const VtkFile g = read_vtk(o);
    REQUIRE(g.points.size() == m->num_vertices());
    for (std::size_t i = 0; i < g.points.size(); ++i) CHECK(g.points[i] == m->vertices()[i]);
  }
  SUBCASE("subdivided sampling") {
    auto m = std::make_shared<const Mesh>(generate_structured(1, 1, Rectangle{}));
    const TaylorHoodSpaces s = build_taylor_hood(m, 2);
    const StateLayout ll = StateLayout::of(s);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(ll.size());
    y.segment(0, ll.scalar) = interpolate(s.density, ScalarFunction([](const Point& p) { return p.x() * p.y(); }));
    std::stringstream o;
    write_vtk(o, s, ll, y, 3);
    const VtkFile g = read_vtk(o);
    CHECK(g.points.size() == 2 * 10);
    CHECK(g.cells.size() == 2 * 9);
    for (std::size_t i = 0; i < g.points.size(); ++i)
      CHECK(g.data.at("rho")[i] == doctest::Approx(g.points[i].x() * g.points[i].y()).epsilon(1e-13));
    CHECK_THROWS_AS(write_vtk(o, s, ll, y, 0), InvalidArgument);
  }
}

TEST_CASE("solve on a constant state keeps the snapshots fixed") {
  const fs::path dir = scratch_dir("solve");
  RunConfig c = parse_config("[run]\ncase = custom\ndt = 1e-3\nt_final = 3e-3\n[mesh]\nnx = 2\nny = 2\n"
                             "[custom]\nsnapshot_every = 1\n");
  c.output_dir = dir.string();
  std::ostringstream log;
  const RunArtifacts art = run_command(Command::Solve, c, 1, log);
  REQUIRE(art.files.size() == 5);
  CHECK(fs::path(art.files[0]).filename() == "config.ini");
  CHECK(parse_config(slurp(art.files[0])) == c);
  std::istringstream s0(slurp(dir / "fields_000000.vtk"));
  const VtkFile f0 = read_vtk(s0);
  for (int n = 1; n <= 3; ++n) {
    char name[32];
    std::snprintf(name, sizeof name, "fields_%06d.vtk", n);
    REQUIRE(fs::exists(dir / name));
    std::istringstream sn(slurp(dir / name));
    const VtkFile fn = read_vtk(sn);
    REQUIRE(fn.points.size() == f0.points.size());
    for (const char* field : {"rho", "T"})
      for (std::size_t i = 0; i < f0.points.size(); ++i)
        CHECK(fn.data.at(field)[i] == doctest::Approx(f0.data.at(field)[i]).epsilon(1e-12));
    for (double v : fn.data.at("u_magnitude")) CHECK(std::abs(v) < 1e-10);
  }
  fs::remove_all(dir);
}

TEST_CASE("mms and ap commands write their tables") {
  const fs::path dir = scratch_dir("tables");
  RunConfig m = parse_config("[run]\ncase = mms\nt_final = 5e-3\ndt = 1e-3\n[mms]\nlevels = 2\n");
  m.output_dir = dir.string();
  std::ostringstream log;
  run_command(Command::Mms, m, 1, log);
  const std::string conv = slurp(dir / "convergence_k1.csv");
  CHECK(std::count(conv.begin(), conv.end(), '\n') == 3);
  CHECK(fs::exists(dir / "forcing_discrepancy.csv"));
  CHECK(parse_config(slurp(dir / "config.ini")) == m);
  CHECK_THROWS_AS(run_command(Command::Ap, m, 1, log), InvalidArgument);

  RunConfig a = parse_config("[run]\ncase = ap\nk = 1\nt_final = 2e-4\ndt = 1e-4\n[mesh]\nnx = 2\nny = 2\n"
                             "[ap]\nmach = 0.2, 0.1\n");
  a.output_dir = dir.string();
  run_command(Command::Ap, a, 1, log);
  const std::string ap = slurp(dir / "ap.csv");
  CHECK(ap.rfind("Ma,diff_p,diff_rho\n", 0) == 0);
  CHECK(std::count(ap.begin(), ap.end(), '\n') == 3);
  fs::remove_all(dir);
}

TEST_CASE("worker count resolution") {
  ::unsetenv("VMFEM_THREADS");
  CHECK(resolve_threads(0) == 1);
  CHECK(resolve_threads(3) == 3);
  ::setenv("VMFEM_THREADS", "4", 1);
  CHECK(resolve_threads(0) == 4);
  CHECK(resolve_threads(2) == 2);
  ::setenv("VMFEM_THREADS", "junk", 1);
  CHECK(resolve_threads(0) == 1);
  ::unsetenv("VMFEM_THREADS");
}
