#include "cli_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>
#include <stdexcept>

namespace zrp::cli {

Rational parse_scalar(const std::string& text, const std::string& field, bool float_ok) {
  static const std::regex decimal(R"(^\s*([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?\s*$)");
  if (!float_ok) return parse_rational(text, field);
  std::smatch m;
  if (text.find('/') != std::string::npos || !std::regex_match(text, m, decimal) || (m[2].length() + m[3].length()) == 0)
    return parse_rational(text, field);
  std::string digits = m[2].str() + m[3].str();
  mpz_class num(digits, 10);
  long exp10 = (m[4].matched ? std::stol(m[4].str()) : 0) - static_cast<long>(m[3].length());
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
  Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
  r.canonicalize();
  return m[1].str() == "-" ? Rational(-r) : r;
}

std::vector<Rational> parse_scalar_list(const std::string& text, const std::string& field, bool float_ok) {
  std::vector<Rational> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(parse_scalar(item, field + "[" + std::to_string(out.size()) + "]", float_ok));
  if (out.empty()) throw std::invalid_argument(field + ": empty list");
  return out;
}

MultiIndex parse_index(const std::string& text, const std::string& field) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int x = -1;
    try {
      x = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || x < 0)
      throw std::invalid_argument(field + ": '" + text + "' is not a comma-separated list of nonnegative integers");
    v.push_back(x);
  }
  if (v.empty()) throw std::invalid_argument(field + ": empty list");
  return MultiIndex(v);
}

unsigned thread_cap() {
  const char* env = std::getenv("ZRPLAB_THREADS");
  if (!env || !*env) return 1;
  char* end = nullptr;
  long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1 || v > 4096)
    throw std::invalid_argument(std::string("ZRPLAB_THREADS: '") + env + "' is not a positive integer");
  return static_cast<unsigned>(v);
}

json state_json(const State& s) {
  json occ = json::array();
  for (auto& a : s) occ.push_back(a.data());
  return json{{"label", multiset_label(s)}, {"occupation", occ}};
}

State state_from_json(const json& j) {
  State s;
  for (auto& a : j.at("occupation")) s.push_back(MultiIndex(a.get<std::vector<int>>()));
  return s;
}

json operator_json(const SparseOperator& op) {
  json dom = json::array(), cod = json::array(), entries = json::array();
  for (auto& s : op.dom->states()) dom.push_back(state_json(s));
  for (auto& s : op.cod->states()) cod.push_back(state_json(s));
  for (std::size_t j = 0; j < op.mat.cols(); ++j)
    for (auto& [i, v] : op.mat.column(j)) entries.push_back(json::array({i, j, to_string(v)}));
  return json{{"rows", op.mat.rows()}, {"cols", op.mat.cols()}, {"domain", dom}, {"codomain", cod}, {"entries", entries}};
}

SparseOperator operator_from_json(const json& j) {
  std::vector<State> dom, cod;
  for (auto& s : j.at("domain")) dom.push_back(state_from_json(s));
  for (auto& s : j.at("codomain")) cod.push_back(state_from_json(s));
  SparseOperator op(make_basis(dom), make_basis(cod));
  if (op.mat.rows() != j.at("rows").get<std::size_t>() || op.mat.cols() != j.at("cols").get<std::size_t>())
    throw std::runtime_error("operator document: shape does not match the bases");
  for (auto& e : j.at("entries"))
    op.mat.set(e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>(), parse_rational(e.at(2).get<std::string>(), "entry"));
  return op;
}

namespace {

bool flat(const json& j) {
  if (!j.is_array()) return !j.is_object();
  return std::all_of(j.begin(), j.end(), [](const json& x) { return x.is_primitive() || (x.is_array() && flat(x)); });
}

void dump_to(const json& j, int depth, std::string& out) {
  if (flat(j)) {
    out += j.dump();
    return;
  }
  std::string pad(static_cast<std::size_t>(depth + 1), ' ');
  bool obj = j.is_object();
  out += obj ? "{\n" : "[\n";
  bool first = true;
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!first) out += ",\n";
    first = false;
    out += pad;
    if (obj) out += json(it.key()).dump() + ": ";
    dump_to(*it, depth + 1, out);
  }
  out += "\n" + std::string(static_cast<std::size_t>(depth), ' ') + (obj ? "}" : "]");
}

}  // namespace

std::string dump(const json& j) {
  std::string out;
  dump_to(j, 0, out);
  return out + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + tmp);
    f << content;
    if (!f) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string operator_document(json doc, const SparseOperator& op) {
  doc["operator"] = operator_json(op);
  std::string text = dump(doc);
  SparseOperator back = operator_from_json(json::parse(text).at("operator"));
  if (!(back.mat == op.mat) || !(*back.dom == *op.dom) || !(*back.cod == *op.cod))
    throw std::logic_error("operator document does not round-trip");
  return text;
}

}  // namespace zrp::cli
