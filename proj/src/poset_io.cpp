#include <fstream>
#include <sstream>

#include "finsheaf/poset.hpp"
#include "json.hpp"

namespace finsheaf {

namespace {

std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

// Lines are either a lone label or a chain "a < b < c"; '#' starts a comment.
FinPoset parse_poset_text(const std::string& text) {
  std::vector<std::string> labels;
  std::map<std::string, int> seen;
  std::vector<std::pair<std::string, std::string>> rel;
  auto note = [&](const std::string& l) {
    if (seen.emplace(l, static_cast<int>(labels.size())).second) labels.push_back(l);
  };
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
    line = trim(line);
    if (line.empty()) continue;
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
      auto lt = line.find('<', start);
      parts.push_back(trim(line.substr(start, lt == std::string::npos ? std::string::npos : lt - start)));
      if (lt == std::string::npos) break;
      start = lt + 1;
    }
    for (const auto& p : parts)
      if (p.empty()) throw PreconditionError("line " + std::to_string(lineno) + ": empty label");
    for (const auto& p : parts) note(p);
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) rel.emplace_back(parts[i], parts[i + 1]);
  }
  return FinPoset::from_labeled_relations(std::move(labels), rel);
}

std::string poset_to_text(const FinPoset& X) {
  std::ostringstream os;
  for (const auto& l : X.labels()) os << l << '\n';
  for (auto [x, y] : X.covers()) os << X.label(x) << " < " << X.label(y) << '\n';
  return os.str();
}

FinPoset parse_poset_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed poset JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("elements")) throw PreconditionError("poset JSON needs an \"elements\" array");
  std::vector<std::string> labels;
  std::vector<std::pair<std::string, std::string>> rel;
  try {
    for (const auto& e : j.at("elements")) labels.push_back(e.get<std::string>());
    if (j.contains("covers"))
      for (const auto& c : j.at("covers")) {
        if (!c.is_array() || c.size() != 2) throw PreconditionError("each cover must be a pair [lower, upper]");
        rel.emplace_back(c[0].get<std::string>(), c[1].get<std::string>());
      }
  } catch (const nlohmann::json::exception& e) {
    throw PreconditionError(std::string("malformed poset JSON: ") + e.what());
  }
  return FinPoset::from_labeled_relations(std::move(labels), rel);
}

std::string poset_to_json(const FinPoset& X) {
  nlohmann::ordered_json j;
  j["elements"] = X.labels();
  auto covers = nlohmann::ordered_json::array();
  for (auto [x, y] : X.covers()) covers.push_back({X.label(x), X.label(y)});
  j["covers"] = covers;
  return j.dump();
}

FinPoset read_poset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_poset_json(text);
  return parse_poset_text(text);
}

}  // namespace finsheaf
