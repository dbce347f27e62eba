#include "ctmdp/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "ctmdp/bench.hpp"
#include "ctmdp/error.hpp"
#include "ctmdp/format.hpp"

namespace ctmdp {

namespace {

const char* const kSections[] = {"meta", "reward", "rate", "transition"};

std::vector<std::string> split_words(const std::string& line) {
  std::vector<std::string> words;
  std::istringstream in(line);
  std::string w;
  while (in >> w) words.push_back(w);
  return words;
}

double parse_double(const std::string& text, const std::string& field) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw InvalidInput("instance: bad number '" + text + "' in " + field);
  return value;
}

std::size_t parse_index(const std::string& text, const std::string& field) {
  std::size_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last)
    throw InvalidInput("instance: bad non-negative integer '" + text + "' in " + field);
  return value;
}

void write_table(std::ostream& out, const std::vector<double>& values, std::size_t width) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << format_exact(values[i]);
    out << ((i + 1) % width == 0 ? '\n' : ' ');
  }
}

}  // namespace

void write_instance(std::ostream& out, const CtmdpModel& m) {
  out << "[meta]\n";
  out << "S " << m.num_states << "\n";
  out << "A " << m.num_actions << "\n";
  out << "H " << format_exact(m.horizon) << "\n";
  out << "x0 " << m.initial_state << "\n";
  out << "lambda_min " << format_exact(m.lambda_min) << "\n";
  out << "lambda_max " << format_exact(m.lambda_max) << "\n";
  out << "[reward]\n";
  write_table(out, m.reward, m.num_actions);
  out << "[rate]\n";
  write_table(out, m.rate, m.num_actions);
  out << "[transition]\n";
  write_table(out, m.transition, m.num_states);
}

CtmdpModel read_instance(std::istream& in) {
  std::map<std::string, std::string> meta;
  std::map<std::string, std::vector<std::string>> tables;
  std::string section;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto words = split_words(line);
    if (words.empty()) continue;
    if (words.size() == 1 && words[0].size() > 2 && words[0].front() == '[' && words[0].back() == ']') {
      section = words[0].substr(1, words[0].size() - 2);
      bool known = false;
      for (const char* s : kSections) known = known || section == s;
      if (!known) throw InvalidInput("instance: unknown section [" + section + "] at line " + std::to_string(line_no));
      if (section != "meta" && tables.count(section))
        throw InvalidInput("instance: duplicate section [" + section + "]");
      tables[section];
      continue;
    }
    if (section.empty()) throw InvalidInput("instance: data before the first section at line " + std::to_string(line_no));
    if (section == "meta") {
      if (words.size() != 2)
        throw InvalidInput("instance: meta line " + std::to_string(line_no) + " must be '<key> <value>'");
      meta[words[0]] = words[1];
    } else {
      auto& cells = tables[section];
      cells.insert(cells.end(), words.begin(), words.end());
    }
  }

  auto meta_field = [&meta](const char* key) -> const std::string& {
    auto it = meta.find(key);
    if (it == meta.end()) throw InvalidInput(std::string("instance: missing meta field '") + key + "'");
    return it->second;
  };
  const std::size_t S = parse_index(meta_field("S"), "meta.S");
  const std::size_t A = parse_index(meta_field("A"), "meta.A");
  if (S == 0) throw InvalidInput("instance: meta.S must be positive");
  if (A == 0) throw InvalidInput("instance: meta.A must be positive");
  CtmdpModel m = CtmdpModel::zeros(S, A, parse_double(meta_field("H"), "meta.H"),
                                   parse_index(meta_field("x0"), "meta.x0"),
                                   parse_double(meta_field("lambda_min"), "meta.lambda_min"),
                                   parse_double(meta_field("lambda_max"), "meta.lambda_max"));
  for (const auto& [key, value] : meta) {
    if (key != "S" && key != "A" && key != "H" && key != "x0" && key != "lambda_min" && key != "lambda_max")
      throw InvalidInput("instance: unknown meta field '" + key + "'");
  }

  auto fill = [&tables](const std::string& name, std::vector<double>& target) {
    auto it = tables.find(name);
    if (it == tables.end()) throw InvalidInput("instance: missing section [" + name + "]");
    if (it->second.size() != target.size()) {
      std::ostringstream msg;
      msg << "instance: [" << name << "] has " << it->second.size() << " values, expected " << target.size();
      throw InvalidInput(msg.str());
    }
    for (std::size_t i = 0; i < target.size(); ++i) target[i] = parse_double(it->second[i], "[" + name + "]");
  };
  fill("reward", m.reward);
  fill("rate", m.rate);
  fill("transition", m.transition);

  const auto issues = validate_model(m);
  if (!issues.empty()) throw InvalidInput("instance: " + issues.front());
  return m;
}

CtmdpModel load_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("instance: cannot open '" + path + "'");
  return read_instance(in);
}

void save_instance_file(const std::string& path, const CtmdpModel& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  write_instance(out, m);
  if (!out) throw Error("write failed for '" + path + "'");
}

CtmdpModel resolve_instance(const std::string& spec) {
  if (spec == "machine-repair") return machine_repair_instance();
  if (spec == "single-absorbing") return single_absorbing_instance();
  if (spec.rfind("hard:", 0) == 0) {
    std::vector<std::string> parts;
    std::stringstream ss(spec.substr(5));
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() < 4 || parts.size() > 6)
      throw InvalidInput("instance: expected hard:S:A:j:gap[:lambda_max[:H]], got '" + spec + "'");
    const double lambda_max = parts.size() > 4 ? parse_double(parts[4], "hard lambda_max") : 7.0;
    const double horizon = parts.size() > 5 ? parse_double(parts[5], "hard H") : 1.0;
    const auto params = make_hard_params(parse_index(parts[0], "hard S"), parse_index(parts[1], "hard A"), 0,
                                         lambda_max, horizon, parse_index(parts[2], "hard j"),
                                         parse_double(parts[3], "hard gap"));
    return hard_instance(params);
  }
  return load_instance_file(spec);
}

}  // namespace ctmdp
