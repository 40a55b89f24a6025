#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbiperm/cli.hpp"
#include "qbiperm/json_io.hpp"
#include "support.hpp"

using namespace qbiperm;
using namespace testing;
using io::Json;

namespace {

struct Result {
  int code;
  std::string out, err;
  Json json() const { return Json::parse(out); }
  std::string kind() const { return Json::parse(err)["kind"].get<std::string>(); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "qbiperm_cli_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

std::string write(const std::string& name, const std::string& text) {
  const auto path = scratch(name);
  std::ofstream(path) << text;
  return path.string();
}

// Rank by Gaussian elimination with partial pivoting.
std::size_t rank_of(Matrix m) {
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t best = rank;
    for (std::size_t r = rank; r < m.rows(); ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c))) best = r;
    if (std::abs(m(best, c)) < 1e-12) continue;
    for (std::size_t k = 0; k < m.cols(); ++k) std::swap(m(rank, k), m(best, k));
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      const Complex f = m(r, c) / m(rank, c);
      for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) -= f * m(rank, k);
    }
    ++rank;
  }
  return rank;
}

}  // namespace

TEST_CASE("components") {
  const Result r = run({"components", "--dom", "1,1", "--cod", "2"});
  REQUIRE(r.code == 0);
  const Json atlas = r.json();
  REQUIRE(atlas.size() == 3);
  CHECK(atlas[0]["real_dimension"] == 0);
  CHECK(atlas[1]["real_dimension"] == 2);
  CHECK(atlas[2]["real_dimension"] == 0);
  CHECK(atlas[1]["sbar"] == Json::array({1, 1}));
  CHECK(atlas[0]["is_point"] == true);
}

TEST_CASE("eval and compare") {
  const std::string qft = data_path("circuits/qft3.qc");
  const Result same = run({"compare", qft, qft});
  REQUIRE(same.code == 0);
  CHECK(same.json()["equal"] == true);
  CHECK(same.json()["distance"] == 0.0);

  const Result e = run({"eval", qft});
  REQUIRE(e.code == 0);
  const Matrix m = io::matrix_from_json(e.json());
  CHECK(m.rows() == 8);
  CHECK(is_unitary(m, 1e-12));
  CHECK(run({"eval", qft}).out == e.out);

  const std::string path = scratch("qft3.json").string();
  const Result written = run({"eval", qft, "--out", path});
  CHECK(written.code == 0);
  CHECK(written.out.empty());
  CHECK(io::dump(io::read_json_file(path)) == e.out);

  // A JSON matrix and the circuit it came from compare equal.
  CHECK(run({"compare", path, qft}).json()["equal"] == true);
  const Result vs_h = run({"compare", data_path("circuits/qft3.qc"), write("h.qc", "H")});
  CHECK(vs_h.code == 1);
  CHECK(vs_h.kind() == "ShapeError");
}

TEST_CASE("tolerance precedence") {
  // Two single-qubit phase gates 1e-6 apart.
  const std::string a = write("a.qc", "phase(0)");
  const std::string b = write("b.qc", "phase(0.000001)");
  ::unsetenv("QBIPERM_TOL");
  CHECK(run({"compare", a, b}).json()["equal"] == false);
  ::setenv("QBIPERM_TOL", "1e-3", 1);
  CHECK(run({"compare", a, b}).json()["equal"] == true);
  CHECK(run({"compare", a, b, "--tol", "1e-12"}).json()["equal"] == false);
  ::setenv("QBIPERM_TOL", "lots", 1);
  CHECK(run({"compare", a, b}).code == 2);
  CHECK(run({"compare", a, b, "--tol", "1"}).json()["equal"] == true);
  ::unsetenv("QBIPERM_TOL");
}

TEST_CASE("dilate and normalform") {
  const std::string ampdamp = data_path("channels/ampdamp.json");
  const Channel c = io::channel_from_json(io::read_json_file(ampdamp));
  CHECK(channel_equal(c, amplitude_damping(), 1e-12).equal);

  const Result r = run({"dilate", ampdamp});
  REQUIRE(r.code == 0);
  const Json nf = r.json();
  // q = (Choi rank) * m.
  CHECK(nf["q"] == rank_of(c.block(0, 0)) * 2);
  CHECK(nf["q"] == 4);
  CHECK(nf["sbar"] == Json::array({2}));
  CHECK(nf["picture"] == "schrodinger");
  CHECK(channel_equal(eval_normal_form(io::normal_form_from_json(nf)), c, 1e-8).equal);

  const Result h = run({"normalform", ampdamp, "--picture", "heisenberg"});
  REQUIRE(h.code == 0);
  CHECK(h.json()["picture"] == "heisenberg");
  CHECK(channel_equal(eval_normal_form(io::normal_form_from_json(h.json())), dualize(c), 1e-8).equal);

  // Two domain blocks give one normal form each.
  const Result multi = run({"dilate", write("blocks.qc", "id[1,2]")});
  REQUIRE(multi.code == 0);
  CHECK(multi.json().size() == 2);
  CHECK(multi.json()[1]["p"] == 2);
  CHECK(multi.json()[1]["mbar"] == Json::array({1, 2}));

  const Result bad = run({"dilate", data_path("channels/transpose.json")});
  CHECK(bad.code == 1);
  CHECK(bad.kind() == "NotCP");
}

TEST_CASE("distance and lift") {
  const std::string ampdamp = data_path("channels/ampdamp.json");
  CHECK(run({"distance", ampdamp, ampdamp}).json()["distance"] == 0.0);
  const Result d = run({"distance", write("id.qc", "id[2]"), write("x.qc", "X")});
  CHECK(d.json()["distance"].get<double>() == doctest::Approx(2.0));

  const Result lifted = run({"lift", "--target", "cptp", ampdamp});
  REQUIRE(lifted.code == 0);
  CHECK(channel_equal(io::channel_from_json(lifted.json()), amplitude_damping(), 1e-8).equal);

  const Result dual = run({"lift", "--target", "cptp", data_path("channels/diagonal_embedding.json")});
  REQUIRE(dual.code == 0);
  const Channel measure = io::channel_from_json(io::read_json_file(data_path("channels/measure.json")));
  CHECK(channel_equal(io::channel_from_json(dual.json()), measure, 1e-8).equal);

  CHECK(run({"lift", "--target", "terminal", ampdamp}).code == 0);
  CHECK(run({"lift", "--target", "nowhere", ampdamp}).code == 2);
}

TEST_CASE("selftest") {
  const Result r = run({"selftest", "--seed", "3", "--samples", "3", "--continuity-samples", "20"});
  REQUIRE(r.code == 0);
  CHECK(r.json()["passed"] == true);
  CHECK(r.json()["seed"] == 3);
  CHECK(run({"selftest", "--seed", "3", "--samples", "3", "--continuity-samples", "20"}).out == r.out);
}

TEST_CASE("errors") {
  const Result usage = run({"frobnicate"});
  CHECK(usage.code == 2);
  CHECK(usage.kind() == "UsageError");
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);

  const Result syntax = run({"eval", write("bad.qc", "H ; ; T")});
  CHECK(syntax.code == 2);
  CHECK(syntax.kind() == "SyntaxError");
  CHECK(Json::parse(syntax.err)["message"].get<std::string>().find("1:5") != std::string::npos);

  const Result type = run({"eval", write("mistyped.qc", "H ; swap")});
  CHECK(type.code == 2);
  CHECK(type.kind() == "TypeError");

  const Result format = run({"dilate", write("broken.json", "{\"dom\": [2]")});
  CHECK(format.code == 2);
  CHECK(format.kind() == "FormatError");

  const Result missing = run({"dilate", scratch("absent.json").string()});
  CHECK(missing.code == 2);
}
