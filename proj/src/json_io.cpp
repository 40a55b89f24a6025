#include <fstream>
#include <sstream>

#include "qbiperm/error.hpp"
#include "qbiperm/json_io.hpp"

namespace qbiperm::io {

namespace {

[[noreturn]] void format_error(const std::string& msg) { fail(ErrorKind::FormatError, msg); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) format_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t natural(const Json& j, const char* what) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0))
    format_error(std::string(what) + " must be a natural number");
  return j.get<std::size_t>();
}

std::vector<std::size_t> naturals(const Json& j, const char* what) {
  if (!j.is_array()) format_error(std::string(what) + " must be an array");
  std::vector<std::size_t> out;
  for (const auto& x : j) out.push_back(natural(x, what));
  return out;
}

double number(const Json& j) {
  if (!j.is_number()) format_error("matrix entries must be numbers");
  return j.get<double>();
}

}  // namespace

Json to_json(const Matrix& m) {
  Json data = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) data.push_back({m(r, c).real(), m(r, c).imag()});
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from_json(const Json& j) {
  const std::size_t rows = natural(field(j, "rows"), "rows");
  const std::size_t cols = natural(field(j, "cols"), "cols");
  const Json& data = field(j, "data");
  if (!data.is_array() || data.size() != rows * cols)
    format_error("matrix data must hold rows * cols entries");
  Matrix m(rows, cols);
  for (std::size_t k = 0; k < data.size(); ++k) {
    const Json& e = data[k];
    if (e.is_number()) {
      m(k / cols, k % cols) = number(e);
    } else if (e.is_array() && e.size() == 2) {
      m(k / cols, k % cols) = Complex(number(e[0]), number(e[1]));
    } else {
      format_error("matrix entries are [re, im] pairs");
    }
  }
  return m;
}

Json to_json(const Channel& c) {
  Json blocks = Json::array();
  for (std::size_t j = 0; j < c.cod().size(); ++j) {
    Json row = Json::array();
    for (std::size_t i = 0; i < c.dom().size(); ++i) row.push_back(to_json(c.block(j, i)));
    blocks.push_back(std::move(row));
  }
  return {{"picture", std::string(picture_name(c.picture()))},
          {"dom", c.dom().dims()},
          {"cod", c.cod().dims()},
          {"blocks", std::move(blocks)}};
}

Channel channel_from_json(const Json& j) {
  Picture picture = Picture::schrodinger;
  if (j.is_object() && j.contains("picture")) {
    if (!j["picture"].is_string()) format_error("picture must be a string");
    picture = parse_picture(j["picture"].get<std::string>());
  }
  ChoiFamily map{CStarObject(naturals(field(j, "dom"), "dom")), CStarObject(naturals(field(j, "cod"), "cod")), {}};
  const Json& blocks = field(j, "blocks");
  if (!blocks.is_array() || blocks.size() != map.cod.size())
    format_error("blocks must have one row per codomain block");
  for (const auto& row : blocks) {
    if (!row.is_array() || row.size() != map.dom.size())
      format_error("each block row must have one entry per domain block");
    std::vector<Matrix> out;
    for (const auto& m : row) out.push_back(matrix_from_json(m));
    map.blocks.push_back(std::move(out));
  }
  return Channel::make(std::move(map), picture);
}

Json to_json(const NormalForm& nf) {
  return {{"q", nf.q},       {"p", nf.p},           {"mbar", nf.mbar},
          {"sbar", nf.sbar}, {"u", to_json(nf.u)}, {"picture", std::string(picture_name(nf.picture))}};
}

NormalForm normal_form_from_json(const Json& j) {
  NormalForm nf;
  nf.q = natural(field(j, "q"), "q");
  nf.p = natural(field(j, "p"), "p");
  nf.mbar = naturals(field(j, "mbar"), "mbar");
  nf.sbar = naturals(field(j, "sbar"), "sbar");
  nf.u = matrix_from_json(field(j, "u"));
  if (!field(j, "picture").is_string()) format_error("picture must be a string");
  nf.picture = parse_picture(j["picture"].get<std::string>());
  if (nf.mbar.size() != nf.sbar.size()) format_error("mbar and sbar differ in length");
  if (nf.u.rows() != nf.q || nf.u.cols() != nf.q) format_error("u must be q x q");
  return nf;
}

Json to_json(const ComponentInfo& info) {
  return {{"n", info.tuple.n},
          {"mbar", info.tuple.mbar},
          {"sbar", info.tuple.sbar},
          {"real_dimension", info.real_dimension},
          {"is_point", info.is_point}};
}

Json to_json(const ContinuityEntry& entry) {
  return {{"bound", entry.bound}, {"max_ratio", entry.max_ratio}, {"samples", entry.samples}};
}

Json to_json(const SelfTestReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back({{"name", c.name}, {"samples", c.samples}, {"failures", c.failures}});
  }
  return {{"target", report.target}, {"seed", report.seed}, {"passed", report.passed()}, {"checks", std::move(checks)}};
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    format_error(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) format_error("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str());
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace qbiperm::io
