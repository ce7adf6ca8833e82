#include "geopic/config.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <variant>
#include <vector>

namespace geopic {
namespace {

// The subset of TOML used by the configuration files: [section] headers,
// key = value lines with strings, booleans, numbers or flat numeric arrays,
// and # comments.
using Value = std::variant<std::string, bool, double, std::vector<double>>;
using Table = std::map<std::string, std::map<std::string, Value>>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) {
      in_string = !in_string;
    } else if (line[i] == '#' && !in_string) {
      return line.substr(0, i);
    }
  }
  return line;
}

double parse_number(const std::string& text, int line_no) {
  std::string cleaned;
  for (char c : text) {
    if (c != '_') {
      cleaned.push_back(c);
    }
  }
  if (cleaned == "inf" || cleaned == "+inf" || cleaned == "-inf" || cleaned == "nan") {
    throw ConfigError("line " + std::to_string(line_no) + ": non-finite number");
  }
  char* end = nullptr;
  const double v = std::strtod(cleaned.c_str(), &end);
  if (cleaned.empty() || end != cleaned.c_str() + cleaned.size()) {
    throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + text + "'");
  }
  return v;
}

Value parse_value(const std::string& text, int line_no) {
  if (text.empty()) {
    throw ConfigError("line " + std::to_string(line_no) + ": missing value");
  }
  if (text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') {
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated string");
    }
    return text.substr(1, text.size() - 2);
  }
  if (text == "true") return true;
  if (text == "false") return false;
  if (text.front() == '[') {
    if (text.back() != ']') {
      throw ConfigError("line " + std::to_string(line_no) + ": unterminated array");
    }
    std::vector<double> items;
    std::stringstream body(text.substr(1, text.size() - 2));
    std::string item;
    while (std::getline(body, item, ',')) {
      item = trim(item);
      if (!item.empty()) {
        items.push_back(parse_number(item, line_no));
      }
    }
    return items;
  }
  return parse_number(text, line_no);
}

Table parse_table(std::string_view text) {
  Table table;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      if (table.count(section) != 0) {
        throw ConfigError("line " + std::to_string(line_no) + ": duplicate section [" + section + "]");
      }
      table[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside of a section");
    }
    const std::string key = trim(line.substr(0, eq));
    auto& entries = table[section];
    if (entries.count(key) != 0) {
      throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    entries[key] = parse_value(trim(line.substr(eq + 1)), line_no);
  }
  return table;
}

// Pulls typed values out of one section and rejects anything left over.
class SectionReader {
 public:
  SectionReader(Table& table, const std::string& name) : name_(name) {
    if (auto it = table.find(name); it != table.end()) {
      entries_ = std::move(it->second);
      table.erase(it);
    }
  }

  ~SectionReader() noexcept(false) {
    if (!entries_.empty() && std::uncaught_exceptions() == 0) {
      throw ConfigError("unknown key '" + entries_.begin()->first + "' in [" + name_ + "]");
    }
  }

  void read(const std::string& key, double& out) {
    if (auto v = take(key)) {
      if (const double* d = std::get_if<double>(&*v)) {
        out = *d;
        return;
      }
      fail(key, "a number");
    }
  }

  void read(const std::string& key, int& out) {
    double d = out;
    read(key, d);
    if (d != static_cast<double>(static_cast<int>(d))) {
      fail(key, "an integer");
    }
    out = static_cast<int>(d);
  }

  void read(const std::string& key, bool& out) {
    if (auto v = take(key)) {
      if (const bool* b = std::get_if<bool>(&*v)) {
        out = *b;
        return;
      }
      fail(key, "a boolean");
    }
  }

  void read(const std::string& key, std::string& out) {
    if (auto v = take(key)) {
      if (const std::string* s = std::get_if<std::string>(&*v)) {
        out = *s;
        return;
      }
      fail(key, "a string");
    }
  }

  void read(const std::string& key, std::optional<std::pair<double, double>>& out) {
    if (auto v = take(key)) {
      if (const auto* arr = std::get_if<std::vector<double>>(&*v)) {
        if (arr->empty()) {
          out.reset();
          return;
        }
        if (arr->size() == 2) {
          out = std::pair{(*arr)[0], (*arr)[1]};
          return;
        }
      }
      fail(key, "an array of two numbers (or [] for none)");
    }
  }

 private:
  std::optional<Value> take(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
      return std::nullopt;
    }
    Value v = std::move(it->second);
    entries_.erase(it);
    return v;
  }

  [[noreturn]] void fail(const std::string& key, const char* expected) const {
    throw ConfigError("[" + name_ + "] " + key + ": expected " + expected);
  }

  std::string name_;
  std::map<std::string, Value> entries_;
};

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  std::string s(buf);
  if (s.find_first_of(".eEn") == std::string::npos) {
    s += ".0";
  }
  return s;
}

}  // namespace

SimConfig parse_config(std::string_view toml_text) {
  Table table = parse_table(toml_text);

  std::string case_name = std::string(to_string(CaseId::weibel));
  if (auto it = table.find("case"); it != table.end()) {
    if (auto name = it->second.find("name"); name != it->second.end()) {
      const auto* s = std::get_if<std::string>(&name->second);
      if (s == nullptr) {
        throw ConfigError("[case] name: expected a string");
      }
      case_name = *s;
    }
  }
  const auto id = parse_case_id(case_name);
  if (!id) {
    throw ConfigError("unknown case '" + case_name + "'");
  }
  SimConfig c = SimConfig::preset(*id);

  {
    SectionReader r(table, "case");
    r.read("name", case_name);
    r.read("sigma1", c.init.sigma1);
    r.read("sigma2", c.init.sigma2);
    r.read("k", c.init.k);
    r.read("alpha", c.init.alpha);
    r.read("beta", c.init.beta);
    r.read("v01", c.init.v01);
    r.read("v02", c.init.v02);
    r.read("delta", c.init.delta);
  }
  {
    SectionReader r(table, "grid");
    r.read("degree", c.degree);
    r.read("cells", c.n_cells);
  }
  {
    SectionReader r(table, "time");
    std::string prop = std::string(to_string(c.propagator.kind));
    r.read("propagator", prop);
    const auto kind = parse_propagator(prop);
    if (!kind) {
      throw ConfigError("unknown propagator '" + prop + "'");
    }
    c.propagator.kind = *kind;
    r.read("composition_alpha", c.propagator.alpha);
    r.read("dt", c.dt);
    r.read("t_end", c.t_end);
  }
  {
    SectionReader r(table, "particles");
    r.read("count", c.n_particles);
    r.read("antithetic", c.antithetic);
    r.read("sobol_skip", c.sobol_skip);
  }
  {
    SectionReader r(table, "output");
    r.read("path", c.output_path);
    r.read("stride", c.diagnostic_stride);
    r.read("fit_window", c.fit_window);
    std::string field = std::string(to_string(c.fit_field));
    r.read("fit_field", field);
    const auto ff = parse_fit_field(field);
    if (!ff) {
      throw ConfigError("unknown fit field '" + field + "'");
    }
    c.fit_field = *ff;
    std::string mode = std::string(to_string(c.fit_mode));
    r.read("fit_mode", mode);
    const auto fm = parse_fit_mode(mode);
    if (!fm) {
      throw ConfigError("unknown fit mode '" + mode + "'");
    }
    c.fit_mode = *fm;
  }
  if (!table.empty()) {
    throw ConfigError("unknown section [" + table.begin()->first + "]");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return c;
}

SimConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const SimConfig& c) {
  std::ostringstream out;
  const auto& i = c.init;
  out << "[case]\n"
      << "name = \"" << to_string(i.id) << "\"\n"
      << "sigma1 = " << format_double(i.sigma1) << "\n"
      << "sigma2 = " << format_double(i.sigma2) << "\n"
      << "k = " << format_double(i.k) << "\n"
      << "alpha = " << format_double(i.alpha) << "\n"
      << "beta = " << format_double(i.beta) << "\n"
      << "v01 = " << format_double(i.v01) << "\n"
      << "v02 = " << format_double(i.v02) << "\n"
      << "delta = " << format_double(i.delta) << "\n\n";
  out << "[grid]\n"
      << "degree = " << c.degree << "\n"
      << "cells = " << c.n_cells << "\n\n";
  out << "[time]\n"
      << "propagator = \"" << to_string(c.propagator.kind) << "\"\n"
      << "composition_alpha = " << format_double(c.propagator.alpha) << "\n"
      << "dt = " << format_double(c.dt) << "\n"
      << "t_end = " << format_double(c.t_end) << "\n\n";
  out << "[particles]\n"
      << "count = " << c.n_particles << "\n"
      << "antithetic = " << (c.antithetic ? "true" : "false") << "\n"
      << "sobol_skip = " << c.sobol_skip << "\n\n";
  out << "[output]\n"
      << "path = \"" << c.output_path << "\"\n"
      << "stride = " << c.diagnostic_stride << "\n";
  out << "fit_window = [";
  if (c.fit_window) {
    out << format_double(c.fit_window->first) << ", " << format_double(c.fit_window->second);
  }
  out << "]\n"
      << "fit_field = \"" << to_string(c.fit_field) << "\"\n"
      << "fit_mode = \"" << to_string(c.fit_mode) << "\"\n";
  return out.str();
}

}  // namespace geopic
