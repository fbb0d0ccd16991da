// finsheaf: command line front end.  Check-style subcommands exit 0 when the
// property holds and 1 when it fails; input errors exit 2.
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "finsheaf/cm.hpp"
#include "finsheaf/report_json.hpp"
#include "finsheaf/simplicial.hpp"

using namespace finsheaf;

namespace {

struct Options {
  std::string poset, facets, sheaf, against;
  bool json = false, projective = false;
  std::string anchor, point, from, to;
  std::vector<std::string> closed_set;
};

struct Input {
  PosetPtr X;
  std::optional<SheafInput> sheaf;
  std::optional<FacePoset> complex;

  SheafComplex complex_or_constant() const {
    return sheaf ? sheaf->as_complex() : SheafComplex::single(constant_sheaf(X));
  }
  PresentedSheaf presented() const {
    if (!sheaf) throw PreconditionError("this subcommand needs --sheaf");
    return sheaf->presented ? *sheaf->presented : presented_from_free(*sheaf->free);
  }
};

Input load(const Options& o) {
  int sources = !o.poset.empty() + !o.facets.empty() + !o.sheaf.empty();
  if (sources != 1) throw PreconditionError("give exactly one of --poset, --facets, --sheaf");
  Input in;
  if (!o.poset.empty()) {
    in.X = share(read_poset_file(o.poset));
  } else if (!o.facets.empty()) {
    in.complex = from_facets(read_facet_file(o.facets), o.projective);
    in.X = share(in.complex->poset);
  } else {
    in.sheaf = read_sheaf_file(o.sheaf);
    in.X = in.sheaf->base;
  }
  return in;
}

int label_index(const FinPoset& X, const std::string& l) {
  auto i = X.find(l);
  if (!i) throw PreconditionError("unknown point '" + l + "'");
  return *i;
}

// Items are comma separated; commas inside labels are kept when the joined
// text names a point.
std::vector<int> parse_set(const FinPoset& X, const std::vector<std::string>& items) {
  std::vector<int> out;
  for (const auto& item : items) {
    std::string cur;
    std::stringstream ss(item);
    for (std::string tok; std::getline(ss, tok, ',');) {
      cur = cur.empty() ? tok : cur + "," + tok;
      if (X.find(cur)) {
        out.push_back(*X.find(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) throw PreconditionError("unknown point '" + cur + "'");
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> closed_set(const FinPoset& X, const Options& o) {
  if (o.closed_set.empty()) throw PreconditionError("this subcommand needs --closed-set");
  auto K = parse_set(X, o.closed_set);
  if (!is_closed(X, K)) throw PreconditionError("--closed-set is not closed");
  return K;
}

void emit(const Options& o, const json& j) {
  if (o.json)
    std::cout << j.dump() << "\n";
  else
    std::cout << json_to_text(j);
}

void emit_poset(const Options& o, const FinPoset& X) {
  std::cout << (o.json ? poset_to_json(X) + "\n" : poset_to_text(X));
}

using Handler = std::function<int(const Options&)>;

std::map<std::string, std::pair<std::string, Handler>> commands() {
  std::map<std::string, std::pair<std::string, Handler>> c;
  c["info"] = {"dimension, locality and irreducibility", [](const Options& o) {
                 Input in = load(o);
                 emit(o, to_json(*in.X, structure_report(*in.X)));
                 return 0;
               }};
  c["homology"] = {"homology of the sheaf (Z by default)", [](const Options& o) {
                     Input in = load(o);
                     emit(o, to_json(homology(in.complex_or_constant())));
                     return 0;
                   }};
  c["cohomology"] = {"global cohomology of the sheaf (Z by default)", [](const Options& o) {
                       Input in = load(o);
                       emit(o, to_json(global_cohomology(in.complex_or_constant())));
                       return 0;
                     }};
  c["reduced"] = {"reduced homology and cohomology of the space", [](const Options& o) {
                    Input in = load(o);
                    emit(o, {{"homology", to_json(reduced_homology(*in.X))},
                             {"cohomology", to_json(reduced_cohomology(*in.X))}});
                    return 0;
                  }};
  c["local-cohomology"] = {"cohomology with supports in --closed-set or at --point", [](const Options& o) {
                             Input in = load(o);
                             SheafComplex F = in.complex_or_constant();
                             if (!o.point.empty())
                               emit(o, to_json(point_local_cohomology(F, label_index(*in.X, o.point))));
                             else
                               emit(o, to_json(local_cohomology(F, closed_set(*in.X, o))));
                             return 0;
                           }};
  c["ext"] = {"Ext between the skyscrapers at --from and --to", [](const Options& o) {
                Input in = load(o);
                int x = label_index(*in.X, o.from), y = label_index(*in.X, o.to);
                if (in.X->lt(x, y))
                  emit(o, to_json(ext_skyscrapers(*in.X, x, y)));
                else
                  emit(o, to_json(rhom_global(SheafComplex::single(skyscraper(in.X, x)),
                                              SheafComplex::single(skyscraper(in.X, y)))));
                return 0;
              }};
  c["sphere-report"] = {"homology of every open interval", [](const Options& o) {
                          Input in = load(o);
                          emit(o, to_json(*in.X, sphere_report(*in.X)));
                          return 0;
                        }};
  c["dualizable"] = {"check local dualizability", [](const Options& o) {
                       Input in = load(o);
                       auto r = sphere_report(*in.X);
                       json j = to_json(*in.X, r);
                       j.erase("intervals");
                       emit(o, j);
                       return r.is_locally_dualizable ? 0 : 1;
                     }};
  c["canonical"] = {"canonical complex and codimension function", [](const Options& o) {
                      Input in = load(o);
                      json j = to_json(*in.X, canonical_complex(in.X));
                      if (!o.anchor.empty()) {
                        auto phi = codimension_function(*in.X, {{label_index(*in.X, o.anchor), 0}});
                        if (phi) {
                          json p = json::object();
                          for (int x = 0; x < in.X->size(); ++x) p[in.X->label(x)] = (*phi)[x];
                          j["codimension"] = p;
                        } else {
                          j["codimension"] = nullptr;
                        }
                      }
                      emit(o, j);
                      return 0;
                    }};
  c["dualize"] = {"stalk cohomology of D(F)", [](const Options& o) {
                    Input in = load(o);
                    if (!in.sheaf) throw PreconditionError("dualize needs --sheaf");
                    emit(o, stalks_json(*in.X, stalk_cohomology(dualize(in.sheaf->as_complex()))));
                    return 0;
                  }};
  c["reflexive"] = {"check D(D(F)) = F (all skyscrapers without --sheaf)", [](const Options& o) {
                      Input in = load(o);
                      require_dualizable_local(*in.X);
                      json j = json::object();
                      bool ok = true;
                      if (in.sheaf) {
                        ok = reflexivity_check(in.sheaf->as_complex());
                      } else {
                        for (int x = 0; x < in.X->size(); ++x) {
                          bool r = reflexivity_check(SheafComplex::single(skyscraper(in.X, x)));
                          j["skyscrapers"][in.X->label(x)] = r;
                          ok = ok && r;
                        }
                      }
                      j["reflexive"] = ok;
                      emit(o, j);
                      return ok ? 0 : 1;
                    }};
  c["cm"] = {"check that the space is Cohen-Macaulay", [](const Options& o) {
               Input in = load(o);
               auto v = is_cm_space(*in.X);
               emit(o, to_json(*in.X, v));
               return v.is_cm ? 0 : 1;
             }};
  c["cm-sheaf"] = {"check that the sheaf is Cohen-Macaulay", [](const Options& o) {
                     Input in = load(o);
                     auto v = is_cm_sheaf(in.presented());
                     emit(o, to_json(*in.X, v));
                     return v.is_cm ? 0 : 1;
                   }};
  c["cm-closed"] = {"check that --closed-set is Cohen-Macaulay", [](const Options& o) {
                      Input in = load(o);
                      auto v = is_cm_closed(in.X, closed_set(*in.X, o));
                      emit(o, to_json(*in.X, v));
                      return v.is_cm ? 0 : 1;
                    }};
  c["canonical-sheaf"] = {"stalks of the canonical sheaf", [](const Options& o) {
                            Input in = load(o);
                            emit(o, stalks_json(canonical_sheaf(in.X)));
                            return 0;
                          }};
  c["omega-check"] = {"duality sequences for omega (Gysin with --closed-set)", [](const Options& o) {
                        Input in = load(o);
                        std::vector<int> K;
                        if (!o.closed_set.empty()) K = closed_set(*in.X, o);
                        auto r = omega_duality_sequences(in.X, in.complex_or_constant(), K);
                        emit(o, to_json(r));
                        bool ok = r.sequences_ok && r.punctured_stalks_ok && r.punctured_duality_ok &&
                                  (!r.gysin || r.gysin->ok);
                        return ok ? 0 : 1;
                      }};
  c["baclawski"] = {"Baclawski CM and ACM against our CM", [](const Options& o) {
                      Input in = load(o);
                      emit(o, to_json(*in.X, baclawski_report(*in.X)));
                      return 0;
                    }};
  c["reisner"] = {"Reisner criterion on --facets", [](const Options& o) {
                    Input in = load(o);
                    if (!in.complex) throw PreconditionError("reisner needs --facets");
                    auto v = reisner_check(in.complex->complex);
                    emit(o, to_json(in.complex->complex, v));
                    return v.holds ? 0 : 1;
                  }};
  c["sr-ideal"] = {"minimal non-faces of --facets", [](const Options& o) {
                     Input in = load(o);
                     if (!in.complex) throw PreconditionError("sr-ideal needs --facets");
                     auto g = sr_ideal(in.complex->complex);
                     if (o.json)
                       std::cout << json(g).dump() << "\n";
                     else
                       for (const auto& m : g) std::cout << m << "\n";
                     return 0;
                   }};
  c["subdivide"] = {"barycentric subdivision", [](const Options& o) {
                      emit_poset(o, barycentric(*load(o).X));
                      return 0;
                    }};
  c["opposite"] = {"opposite order", [](const Options& o) {
                     emit_poset(o, opposite(*load(o).X));
                     return 0;
                   }};
  c["product"] = {"product with the poset in --against", [](const Options& o) {
                    if (o.against.empty()) throw PreconditionError("product needs --against");
                    emit_poset(o, product(*load(o).X, read_poset_file(o.against)));
                    return 0;
                  }};
  c["order-complex"] = {"facets of the order complex", [](const Options& o) {
                          Input in = load(o);
                          SimplicialComplex K = order_complex(*in.X);
                          std::vector<std::vector<std::string>> facets;
                          for (const Face& f : K.facets()) {
                            std::vector<std::string> l;
                            for (int v : f) l.push_back(K.vertices()[v]);
                            facets.push_back(l);
                          }
                          if (o.json) {
                            std::cout << json(facets).dump() << "\n";
                          } else {
                            for (const auto& f : facets) {
                              for (std::size_t i = 0; i < f.size(); ++i) std::cout << (i ? " " : "") << f[i];
                              std::cout << "\n";
                            }
                          }
                          return 0;
                        }};
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sheaves, duality and Cohen-Macaulay tests on finite spaces"};
  app.require_subcommand(1);
  Options o;
  auto cmds = commands();
  std::map<CLI::App*, Handler> handlers;
  for (auto& [name, entry] : cmds) {
    CLI::App* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--poset", o.poset, "poset file (text or JSON)");
    sub->add_option("--facets", o.facets, "facet file");
    sub->add_option("--sheaf", o.sheaf, "sheaf JSON file");
    sub->add_flag("--json", o.json, "machine readable output");
    sub->add_flag("--projective", o.projective, "leave out the empty face");
    sub->add_option("--anchor", o.anchor, "point where the codimension function vanishes");
    sub->add_option("--point", o.point, "a point label");
    sub->add_option("--closed-set", o.closed_set, "comma separated labels of a closed set");
    sub->add_option("--against", o.against, "second poset file");
    sub->add_option("--from", o.from, "source point");
    sub->add_option("--to", o.to, "target point");
    handlers[sub] = entry.second;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  for (auto& [sub, h] : handlers) {
    if (!sub->parsed()) continue;
    try {
      return h(o);
    } catch (const PreconditionError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  return 2;
}
