#include <filesystem>
#include <fstream>
#include <sstream>

#include "finsheaf/sheaf.hpp"
#include "json.hpp"

namespace finsheaf {

namespace {

using json = nlohmann::ordered_json;

Integer parse_integer(const json& v) {
  if (v.is_number_integer()) return Integer(std::to_string(v.get<long long>()));
  if (v.is_string()) {
    Integer z;
    if (z.set_str(v.get<std::string>(), 10) != 0) throw PreconditionError("bad integer: " + v.get<std::string>());
    return z;
  }
  throw PreconditionError("matrix entries must be integers");
}

// rows x cols matrix; an empty list is accepted for any shape with a zero side.
IntMatrix parse_matrix(const json& v, std::size_t rows, std::optional<std::size_t> cols, const std::string& what) {
  if (!v.is_array()) throw PreconditionError(what + ": matrix must be a list of rows");
  if (v.empty() && (rows == 0 || (cols && *cols == 0))) return IntMatrix(rows, cols.value_or(0));
  if (v.size() != rows) throw PreconditionError(what + ": expected " + std::to_string(rows) + " rows");
  std::size_t c = cols ? *cols : (rows ? v[0].size() : 0);
  IntMatrix m(rows, c);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != c)
      throw PreconditionError(what + ": expected " + std::to_string(c) + " columns");
    for (std::size_t j = 0; j < c; ++j) m(i, j) = parse_integer(v[i][j]);
  }
  return m;
}

json matrix_json(const IntMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Integer& z = m(i, j);
      if (z.fits_slong_p()) {
        r.push_back(z.get_si());
      } else {
        r.push_back(z.get_str());
      }
    }
    rows.push_back(r);
  }
  return rows;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

SheafInput parse_sheaf_json(const std::string& text, const std::string& base_dir) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed sheaf JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("poset")) throw PreconditionError("sheaf JSON needs a \"poset\" entry");
  SheafInput in;
  try {
    const json& p = j.at("poset");
    if (p.is_string()) {
      std::filesystem::path path(p.get<std::string>());
      if (path.is_relative()) path = std::filesystem::path(base_dir) / path;
      in.base = share(read_poset_file(path.string()));
    } else {
      in.base = share(parse_poset_json(p.dump()));
    }
    const FinPoset& X = *in.base;
    std::vector<std::size_t> ranks(X.size(), 0);
    if (j.contains("stalk_ranks"))
      for (const auto& [label, n] : j.at("stalk_ranks").items()) {
        long v = n.get<long>();
        if (v < 0) throw PreconditionError("negative stalk rank at " + label);
        ranks[X.index(label)] = static_cast<std::size_t>(v);
      }
    std::map<std::pair<int, int>, IntMatrix> covers;
    if (j.contains("cover_maps"))
      for (const auto& [key, m] : j.at("cover_maps").items()) {
        auto arrow = key.find("->");
        if (arrow == std::string::npos) throw PreconditionError("cover map key must look like \"x->y\": " + key);
        int x = X.index(key.substr(0, arrow)), y = X.index(key.substr(arrow + 2));
        if (!X.is_cover(x, y)) throw PreconditionError("cover map given for a non-cover pair: " + key);
        covers.emplace(std::make_pair(x, y), parse_matrix(m, ranks[y], ranks[x], "cover map " + key));
      }
    if (j.contains("relations")) {
      PresentedSheaf P;
      P.base = in.base;
      P.generators = ranks;
      for (int x = 0; x < X.size(); ++x) P.relations.emplace_back(ranks[x], 0);
      for (const auto& [label, m] : j.at("relations").items()) {
        int x = X.index(label);
        P.relations[x] = parse_matrix(m, ranks[x], std::nullopt, "relations at " + label);
      }
      for (auto [x, y] : X.covers()) {
        auto it = covers.find({x, y});
        if (it != covers.end()) {
          P.cover_maps.emplace(std::make_pair(x, y), it->second);
        } else if (ranks[x] && ranks[y]) {
          throw PreconditionError("missing cover map " + X.label(x) + "->" + X.label(y));
        }
      }
      if (auto v = validate(P); !v.ok) throw PreconditionError(v.message);
      in.presented = std::move(P);
    } else {
      in.free = FreeStalkSheaf(in.base, ranks, covers);
    }
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("malformed sheaf JSON: ") + e.what());
  }
  return in;
}

SheafInput read_sheaf_file(const std::string& path) {
  return parse_sheaf_json(slurp(path), std::filesystem::path(path).parent_path().string());
}

std::string sheaf_to_json(const FreeStalkSheaf& F) {
  const FinPoset& X = F.base();
  json j;
  j["poset"] = json::parse(poset_to_json(X));
  json ranks, covers = json::object();
  for (int x = 0; x < X.size(); ++x) ranks[X.label(x)] = F.rank(x);
  for (auto [x, y] : X.covers())
    covers[X.label(x) + "->" + X.label(y)] = matrix_json(F.restriction(x, y).to_dense());
  j["stalk_ranks"] = ranks;
  j["cover_maps"] = covers;
  return j.dump();
}

std::string sheaf_to_json(const PresentedSheaf& F) {
  const FinPoset& X = *F.base;
  json j;
  j["poset"] = json::parse(poset_to_json(X));
  json ranks, covers = json::object(), rel = json::object();
  for (int x = 0; x < X.size(); ++x) {
    ranks[X.label(x)] = F.generators[x];
    rel[X.label(x)] = matrix_json(F.relations[x]);
  }
  for (auto [x, y] : X.covers()) {
    auto it = F.cover_maps.find({x, y});
    covers[X.label(x) + "->" + X.label(y)] =
        matrix_json(it != F.cover_maps.end() ? it->second : IntMatrix(F.generators[y], F.generators[x]));
  }
  j["stalk_ranks"] = ranks;
  j["cover_maps"] = covers;
  j["relations"] = rel;
  return j.dump();
}

}  // namespace finsheaf
