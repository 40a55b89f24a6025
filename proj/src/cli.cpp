#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <variant>

#include "CLI11.hpp"
#include "qbiperm/circuits.hpp"
#include "qbiperm/cli.hpp"
#include "qbiperm/completion.hpp"
#include "qbiperm/error.hpp"
#include "qbiperm/json_io.hpp"
#include "qbiperm/normalform.hpp"
#include "qbiperm/topology.hpp"

namespace qbiperm::cli {

namespace {

using io::Json;
using Morphism = std::variant<Matrix, Channel>;

constexpr double kDefaultTolerance = 1e-9;

struct UsageError {
  std::string message;
};

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// A .qc circuit, or a JSON Matrix, Channel or NormalForm.
Morphism load(const std::string& path) {
  if (ends_with(path, ".qc")) return circuits::evaluate(*circuits::load_file(path));
  const Json j = io::read_json_file(path);
  if (j.is_object() && j.contains("blocks")) return io::channel_from_json(j);
  if (j.is_object() && j.contains("q")) return eval_normal_form(io::normal_form_from_json(j));
  if (j.is_object() && j.contains("rows")) return io::matrix_from_json(j);
  fail(ErrorKind::FormatError, path + " holds neither a matrix, a channel nor a normal form");
}

Channel as_channel(const Morphism& m) {
  if (const auto* c = std::get_if<Channel>(&m)) return *c;
  const Matrix& v = std::get<Matrix>(m);
  return embed_E(v, {v.cols()}, {v.rows()});
}

Json encode(const Morphism& m) {
  return std::visit([](const auto& x) { return io::to_json(x); }, m);
}

Json encode(const std::vector<NormalForm>& parts) {
  if (parts.size() == 1) return io::to_json(parts.front());
  Json arr = Json::array();
  for (const auto& nf : parts) arr.push_back(io::to_json(nf));
  return arr;
}

double resolve_tolerance(const std::optional<double>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QBIPERM_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v >= 0)) throw UsageError{"QBIPERM_TOL is not a tolerance"};
    return v;
  }
  return kDefaultTolerance;
}

Json compare(const Morphism& a, const Morphism& b, double tol) {
  const auto* ma = std::get_if<Matrix>(&a);
  const auto* mb = std::get_if<Matrix>(&b);
  if (ma && mb) {
    if (ma->rows() != mb->rows() || ma->cols() != mb->cols()) {
      fail(ErrorKind::ShapeError, "cannot compare matrices of different shapes");
    }
    const double d = frobenius_distance(*ma, *mb);
    return {{"equal", d <= tol}, {"distance", d}};
  }
  const ChannelComparison c = channel_equal(as_channel(a), as_channel(b), tol);
  return {{"equal", c.equal}, {"distance", c.distance}};
}

Json lift(const std::string& target, const Channel& g) {
  const bool starhom = g.picture() == Picture::heisenberg && classify(g).star_hom;
  if (target == "cptp" || target == "cptp_conjugate") {
    const CptpCategory cat;
    const auto f = target == "cptp" ? embedding_functor() : conjugate_embedding_functor();
    return io::to_json(starhom ? lift_starhom(cat, f, g) : lift_channel(cat, f, g));
  }
  if (target == "terminal") {
    const TerminalCategory cat;
    starhom ? lift_starhom(cat, terminal_functor(), g) : lift_channel(cat, terminal_functor(), g);
    return {{"target", "terminal"}};
  }
  throw UsageError{"unknown target '" + target + "'"};
}

Json selftest(std::uint64_t seed, std::size_t samples, std::size_t continuity_samples, bool& passed) {
  std::vector<SelfTestReport> reports{
      self_test(CptpCategory{}, embedding_functor(), "cptp", seed, samples),
      self_test(CptpCategory{}, conjugate_embedding_functor(), "cptp_conjugate", seed, samples),
      self_test(TerminalCategory{}, terminal_functor(), "terminal", seed, samples),
      self_test_isometry(inclusion_functor(), "isometry", seed, samples),
      self_test_isometry(conjugation_functor(), "isometry_conjugate", seed, samples),
  };
  passed = std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.passed(); });
  Json suites = Json::array();
  for (const auto& r : reports) suites.push_back(io::to_json(r));
  Json continuity = Json::array();
  for (const auto& e : continuity_report(continuity_samples, seed)) {
    passed = passed && e.max_ratio <= 1.0 + 1e-9;
    continuity.push_back(io::to_json(e));
  }
  return {{"seed", seed}, {"passed", passed}, {"suites", std::move(suites)}, {"continuity", std::move(continuity)}};
}

void write_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << Json{{"kind", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Circuits, channels, normal forms and hom-set topology", "qbiperm"};
  app.require_subcommand(1);

  std::string file_a, file_b, out_path, picture, target;
  std::optional<double> tol;
  std::vector<std::size_t> dom;
  std::size_t cod = 0, samples = 20, continuity_samples = 200;
  std::uint64_t seed = 0;

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a circuit file");
  eval_cmd->add_option("file", file_a, "Circuit (.qc)")->required();
  eval_cmd->add_option("--out", out_path, "Write the JSON here instead of stdout");

  auto* compare_cmd = app.add_subcommand("compare", "Compare two morphisms");
  compare_cmd->add_option("a", file_a)->required();
  compare_cmd->add_option("b", file_b)->required();
  compare_cmd->add_option("--tol", tol, "Tolerance (default $QBIPERM_TOL, then 1e-9)");

  auto* dilate_cmd = app.add_subcommand("dilate", "Minimal Stinespring normal form of a channel");
  dilate_cmd->add_option("channel", file_a)->required();

  auto* nf_cmd = app.add_subcommand("normalform", "Normal form in a chosen picture");
  nf_cmd->add_option("input", file_a)->required();
  nf_cmd->add_option("--picture", picture, "schrodinger or heisenberg (default: the input's)")
      ->check(CLI::IsMember({"schrodinger", "heisenberg"}));

  auto* comp_cmd = app.add_subcommand("components", "Connected components of unital *-homomorphisms");
  comp_cmd->add_option("--dom", dom, "Domain block sizes, comma separated")->required()->delimiter(',');
  comp_cmd->add_option("--cod", cod, "Codomain size")->required();

  auto* dist_cmd = app.add_subcommand("distance", "Transfer-norm distance of two channels");
  dist_cmd->add_option("a", file_a)->required();
  dist_cmd->add_option("b", file_b)->required();

  auto* lift_cmd = app.add_subcommand("lift", "Universal lift of a channel or *-homomorphism");
  lift_cmd->add_option("--target", target, "cptp, cptp_conjugate or terminal")->required();
  lift_cmd->add_option("input", file_a)->required();

  auto* self_cmd = app.add_subcommand("selftest", "Sampled law checks");
  self_cmd->add_option("--seed", seed, "RNG seed");
  self_cmd->add_option("--samples", samples, "Samples per law");
  self_cmd->add_option("--continuity-samples", continuity_samples, "Samples per continuity bound");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    write_error(err, "UsageError", e.what());
    return 2;
  }

  try {
    Json result;
    int code = 0;
    if (eval_cmd->parsed()) {
      result = encode(circuits::evaluate(*circuits::load_file(file_a)));
      if (!out_path.empty()) {
        std::ofstream file(out_path);
        if (!file) fail(ErrorKind::FormatError, "cannot write " + out_path);
        file << io::dump(result);
        return 0;
      }
    } else if (compare_cmd->parsed()) {
      const double t = resolve_tolerance(tol);
      result = compare(load(file_a), load(file_b), t);
    } else if (dilate_cmd->parsed()) {
      result = encode(stinespring_components(as_channel(load(file_a))));
    } else if (nf_cmd->parsed()) {
      Channel c = as_channel(load(file_a));
      if (!picture.empty() && parse_picture(picture) != c.picture()) c = dualize(c);
      result = encode(stinespring_components(c));
    } else if (comp_cmd->parsed()) {
      result = Json::array();
      for (const auto& info : component_atlas(cod, dom)) result.push_back(io::to_json(info));
    } else if (dist_cmd->parsed()) {
      result = {{"distance", distance(as_channel(load(file_a)), as_channel(load(file_b)))}};
    } else if (lift_cmd->parsed()) {
      result = lift(target, as_channel(load(file_a)));
    } else if (self_cmd->parsed()) {
      bool passed = false;
      result = selftest(seed, samples, continuity_samples, passed);
      code = passed ? 0 : 1;
    }
    out << io::dump(result);
    return code;
  } catch (const UsageError& e) {
    write_error(err, "UsageError", e.message);
    return 2;
  } catch (const Error& e) {
    write_error(err, kind_name(e.kind()), e.what());
    const ErrorKind k = e.kind();
    return k == ErrorKind::SyntaxError || k == ErrorKind::TypeError || k == ErrorKind::FormatError ? 2 : 1;
  } catch (const std::exception& e) {
    write_error(err, "InternalError", e.what());
    return 1;
  }
}

}  // namespace qbiperm::cli
