#include "sofic/serialize.hpp"

#include <iomanip>
#include <sstream>

#include <openssl/evp.h>

namespace sofic::io {

  namespace {
    [[noreturn]] void fail(std::string const& at, std::string const& what) {
      throw Error(ErrorCode::parse_error, "at " + (at.empty() ? std::string("/") : at) + ": " + what);
    }

    Json const& need(Json const& j, char const* key, std::string const& at) {
      if (!j.is_object()) {
        fail(at, "expected an object");
      }
      auto it = j.find(key);
      if (it == j.end()) {
        fail(at, std::string("missing \"") + key + "\"");
      }
      return *it;
    }

    std::uint64_t unsigned_of(Json const& j, std::string const& at) {
      if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0)) {
        fail(at, "expected a non-negative integer");
      }
      return j.get<std::uint64_t>();
    }

    Element element_of(Json const& j, std::size_t order, std::string const& at) {
      auto v = unsigned_of(j, at);
      if (v >= order) {
        fail(at, "element " + std::to_string(v) + " out of range for order " + std::to_string(order));
      }
      return static_cast<Element>(v);
    }

    std::vector<Element> elements_of(Json const& j, std::size_t order, std::string const& at) {
      if (!j.is_array()) {
        fail(at, "expected an array of element indices");
      }
      std::vector<Element> out;
      for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(element_of(j[i], order, at + "/" + std::to_string(i)));
      }
      return out;
    }

    BigInt big_of(Json const& j, std::string const& at) {
      if (j.is_number_integer()) {
        return j.is_number_unsigned() ? BigInt(j.get<std::uint64_t>()) : BigInt(j.get<std::int64_t>());
      }
      if (j.is_string()) {
        auto const& s = j.get_ref<std::string const&>();
        auto        body = s.size() > 0 && (s[0] == '-' || s[0] == '+') ? s.substr(1) : s;
        if (body.empty() || body.find_first_not_of("0123456789") != std::string::npos) {
          fail(at, "malformed integer \"" + s + "\"");
        }
        return BigInt(s[0] == '+' ? body : s);
      }
      fail(at, "expected an integer");
    }

    Json big_to_json(BigInt const& b) {
      if (b >= std::numeric_limits<std::int64_t>::min() && b <= std::numeric_limits<std::int64_t>::max()) {
        return static_cast<std::int64_t>(b);
      }
      return b.str();
    }

    Permutation permutation_of(Json const& j, std::string const& at) {
      if (!j.is_array()) {
        fail(at, "expected an image array");
      }
      std::vector<Point> images;
      for (std::size_t i = 0; i < j.size(); ++i) {
        images.push_back(static_cast<Point>(element_of(j[i], j.size(), at + "/" + std::to_string(i))));
      }
      try {
        return Permutation(std::move(images));
      } catch (Error const& e) {
        fail(at, e.what());
      }
    }

    template <class Index>
    Json optional_index(std::optional<Index> const& v) {
      return v ? Json(*v) : Json(nullptr);
    }

    Json pair_or_null(std::optional<std::pair<std::size_t, std::size_t>> const& p) {
      return p ? Json::array({p->first, p->second}) : Json(nullptr);
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Parsing
  ////////////////////////////////////////////////////////////////////////

  Rational rational_from_json(Json const& j, std::string const& at) {
    if (j.is_number_integer()) {
      return Rational(j.get<std::int64_t>());
    }
    if (!j.is_string()) {
      fail(at, "expected a rational \"p/q\"");
    }
    try {
      return parse_rational(j.get<std::string>());
    } catch (Error const& e) {
      fail(at, e.what());
    }
  }

  GroupPtr group_from_json(Json const& j, std::string const& at, Caps const& caps) {
    try {
      if (j.contains("table")) {
        auto const&                       t = j["table"];
        std::vector<std::vector<Element>> table;
        if (!t.is_array() || t.empty()) {
          fail(at + "/table", "expected a non-empty array of rows");
        }
        for (std::size_t r = 0; r < t.size(); ++r) {
          auto row_at = at + "/table/" + std::to_string(r);
          if (!t[r].is_array() || t[r].size() != t.size()) {
            fail(row_at, "row has " + std::to_string(t[r].is_array() ? t[r].size() : 0) + " entries");
          }
          table.push_back(elements_of(t[r], t.size(), row_at));
        }
        std::vector<std::string> labels;
        if (j.contains("labels")) {
          labels = j["labels"].get<std::vector<std::string>>();
        }
        return FiniteGroup::from_table(table, std::move(labels), caps);
      }
      if (j.contains("perm_gens")) {
        auto const               degree = unsigned_of(need(j, "degree", at), at + "/degree");
        std::vector<Permutation> gens;
        auto const&              g = j["perm_gens"];
        if (!g.is_array()) {
          fail(at + "/perm_gens", "expected an array of image arrays");
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
          gens.push_back(permutation_of(g[i], at + "/perm_gens/" + std::to_string(i)));
        }
        return from_permutation_generators(gens, degree, caps).group;
      }
      if (j.contains("symmetric")) {
        return symmetric_group(unsigned_of(j["symmetric"], at + "/symmetric"), caps);
      }
      if (j.contains("cyclic")) {
        auto n = unsigned_of(j["cyclic"], at + "/cyclic");
        if (n == 0 || n > caps.max_group_order) {
          fail(at + "/cyclic", "order out of range");
        }
        return cyclic_group(n);
      }
    } catch (nlohmann::json::exception const& e) {
      fail(at, e.what());
    } catch (Error const& e) {
      if (e.code() == ErrorCode::parse_error) {
        throw;
      }
      throw Error(e.code(), "at " + at + ": " + e.what());
    }
    fail(at, "expected \"table\", \"perm_gens\", \"symmetric\" or \"cyclic\"");
  }

  Subgroup subgroup_from_json(Json const& j, GroupPtr const& parent, std::string const& at) {
    try {
      if (j.is_array()) {
        return Subgroup::from_elements(parent, elements_of(j, parent->order(), at));
      }
      if (j.contains("elements")) {
        return Subgroup::from_elements(parent,
                                       elements_of(j["elements"], parent->order(), at + "/elements"));
      }
      if (j.contains("generators")) {
        auto gens = elements_of(j["generators"], parent->order(), at + "/generators");
        return Subgroup::generated_by(parent, gens);
      }
    } catch (Error const& e) {
      if (e.code() == ErrorCode::parse_error) {
        throw;
      }
      throw Error(e.code(), "at " + at + ": " + e.what());
    }
    fail(at, "expected an element list, {\"elements\": ...} or {\"generators\": ...}");
  }

  GraphSpec graph_from_json(Json const& j, std::string const& at) {
    GraphSpec g;
    auto const& v = need(j, "vertices", at);
    if (!v.is_array()) {
      fail(at + "/vertices", "expected an array of ids");
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number_integer()) {
        fail(at + "/vertices/" + std::to_string(i), "expected an integer id");
      }
      g.vertices.push_back(v[i].get<int>());
    }
    auto const& e = j.contains("edges") ? j["edges"] : Json::array();
    if (!e.is_array()) {
      fail(at + "/edges", "expected an array of pairs");
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto here = at + "/edges/" + std::to_string(i);
      if (!e[i].is_array() || e[i].size() != 2 || !e[i][0].is_number_integer()
          || !e[i][1].is_number_integer()) {
        fail(here, "expected a pair of vertex ids");
      }
      int a = e[i][0].get<int>(), b = e[i][1].get<int>();
      for (int x : {a, b}) {
        if (std::find(g.vertices.begin(), g.vertices.end(), x) == g.vertices.end()) {
          fail(here, "unknown vertex " + std::to_string(x));
        }
      }
      g.edges.emplace_back(a, b);
    }
    return g;
  }

  Word word_from_json(AmalgamSpec const& spec, Json const& j, std::string const& at) {
    if (!j.is_array()) {
      fail(at, "expected an array of letters");
    }
    Word w;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto here = at + "/" + std::to_string(i);
      auto const& l = j[i];
      if (!l.is_array() || l.size() != 2) {
        fail(here, "expected [factor, element]");
      }
      std::size_t factor = 0;
      if (l[0].is_string()) {
        auto name = l[0].get<std::string>();
        for (; factor < spec.size() && spec.factor(factor).name() != name; ++factor) {
        }
        if (factor == spec.size()) {
          fail(here + "/0", "unknown factor \"" + name + "\"");
        }
      } else {
        factor = unsigned_of(l[0], here + "/0");
        if (factor >= spec.size()) {
          fail(here + "/0", "factor id " + std::to_string(factor) + " out of range");
        }
      }
      auto const& f = spec.factor(factor);
      FactorValue v;
      if (l[1].is_array()) {
        if (l[1].size() != 2) {
          fail(here + "/1", "expected [element, exponent]");
        }
        v.base  = element_of(l[1][0], f.base()->order(), here + "/1/0");
        v.shift = big_of(l[1][1], here + "/1/1");
        if (!f.has_z() && v.shift != 0) {
          fail(here + "/1/1", "exponent on factor " + f.name() + " without a Z coordinate");
        }
      } else {
        v.base = element_of(l[1], f.base()->order(), here + "/1");
      }
      w.push_back({factor, std::move(v)});
    }
    return w;
  }

  NormalForm normal_form_from_json(AmalgamSpec const& spec, Json const& j, std::string const& at) {
    NormalForm nf;
    nf.head    = element_of(need(j, "head", at), spec.common()->order(), at + "/head");
    nf.letters = word_from_json(spec, need(j, "letters", at), at + "/letters");
    if (!is_normal_form(spec, nf)) {
      fail(at, "not a normal form");
    }
    return nf;
  }

  std::vector<CoSoficChain::Stage> chain_from_json(Json const& j, GroupPtr const& parent,
                                                   std::string const& at) {
    if (!j.is_array()) {
      fail(at, "expected an array of stages");
    }
    std::vector<CoSoficChain::Stage> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
      auto here = at + "/" + std::to_string(i);
      out.push_back({subgroup_from_json(need(j[i], "outer", here), parent, here + "/outer"),
                     subgroup_from_json(need(j[i], "normal", here), parent, here + "/normal")});
    }
    return out;
  }

  DefectReport report_from_json(Json const& j, std::string const& at) {
    DefectReport r;
    auto const&  u = need(j, "unital", at);
    if (!u.is_boolean()) {
      fail(at + "/unital", "expected a boolean");
    }
    r.unital      = u.get<bool>();
    r.mult_defect = rational_from_json(need(j, "mult_defect", at), at + "/mult_defect");
    r.free_defect = rational_from_json(need(j, "free_defect", at), at + "/free_defect");
    r.epsilon     = rational_from_json(need(j, "epsilon", at), at + "/epsilon");
    auto const& p = need(j, "passed", at);
    if (!p.is_boolean()) {
      fail(at + "/passed", "expected a boolean");
    }
    r.passed      = p.get<bool>();
    auto const& w = need(j, "witnesses", at);
    auto const& m = need(w, "multiplicative", at + "/witnesses");
    if (!m.is_null()) {
      if (!m.is_array() || m.size() != 2) {
        fail(at + "/witnesses/multiplicative", "expected a pair or null");
      }
      r.mult_witness = std::pair{unsigned_of(m[0], at + "/witnesses/multiplicative/0"),
                                 unsigned_of(m[1], at + "/witnesses/multiplicative/1")};
    }
    auto const& f = need(w, "free", at + "/witnesses");
    if (!f.is_null()) {
      r.free_witness = unsigned_of(f, at + "/witnesses/free");
    }
    return r;
  }

  ApproxDocument approx_from_json(Json const& j) {
    ApproxDocument doc;
    auto const&    a = need(j, "approx", "");
    std::string    at = "/approx";
    auto&          m  = doc.map;
    m.degree          = unsigned_of(need(a, "degree", at), at + "/degree");
    auto const& sup   = need(a, "support", at);
    if (!sup.is_array()) {
      fail(at + "/support", "expected an array");
    }
    for (auto const& s : sup) {
      m.support.push_back(s.is_string() ? s.get<std::string>() : s.dump());
    }
    m.identity       = element_of(need(a, "identity", at), m.support.size(), at + "/identity");
    auto const& tab  = need(a, "table", at);
    if (!tab.is_array() || tab.size() != m.support.size()) {
      fail(at + "/table", "expected one image array per support element");
    }
    for (std::size_t i = 0; i < tab.size(); ++i) {
      auto p = permutation_of(tab[i], at + "/table/" + std::to_string(i));
      if (p.degree() != m.degree) {
        fail(at + "/table/" + std::to_string(i), "image of degree " + std::to_string(p.degree()));
      }
      m.table.push_back(std::move(p));
    }
    doc.domain.finite_set = [&] {
      std::vector<std::size_t> out;
      for (auto e : elements_of(need(a, "ball", at), m.support.size(), at + "/ball")) {
        out.push_back(e);
      }
      return out;
    }();
    auto const& prods = need(a, "products", at);
    if (!prods.is_array() || prods.size() != doc.domain.finite_set.size()) {
      fail(at + "/products", "expected one row per ball element");
    }
    for (std::size_t i = 0; i < prods.size(); ++i) {
      auto row = elements_of(prods[i], m.support.size(), at + "/products/" + std::to_string(i));
      if (row.size() != doc.domain.finite_set.size()) {
        fail(at + "/products/" + std::to_string(i), "row of the wrong length");
      }
      doc.domain.products.insert(doc.domain.products.end(), row.begin(), row.end());
    }
    if (j.contains("report") && !j["report"].is_null()) {
      doc.report = report_from_json(j["report"], "/report");
    }
    if (j.contains("epsilon")) {
      doc.epsilon = rational_from_json(j["epsilon"], "/epsilon");
    }
    return doc;
  }

  ////////////////////////////////////////////////////////////////////////
  // Emission
  ////////////////////////////////////////////////////////////////////////

  Json to_json(Rational const& r) {
    return format_rational(r);
  }

  Json to_json(Permutation const& p) {
    return p.images();
  }

  Json group_to_json(FiniteGroup const& g) {
    Json labels = Json::array();
    for (Element x = 0; x < g.order(); ++x) {
      labels.push_back(g.label(x));
    }
    return Json{{"table", g.table()}, {"labels", labels}};
  }

  Json to_json(AmalgamSpec const& spec, Letter const& l) {
    if (spec.factor(l.factor).has_z()) {
      return Json::array({l.factor, Json::array({l.value.base, big_to_json(l.value.shift)})});
    }
    return Json::array({l.factor, l.value.base});
  }

  Json to_json(AmalgamSpec const& spec, Word const& w) {
    Json out = Json::array();
    for (auto const& l : w) {
      out.push_back(to_json(spec, l));
    }
    return out;
  }

  Json to_json(AmalgamSpec const& spec, NormalForm const& nf) {
    return Json{{"head", nf.head},
                {"letters", to_json(spec, nf.letters)},
                {"text", to_string(spec, nf)}};
  }

  Json to_json(DefectReport const& r) {
    return Json{{"unital", r.unital},
                {"mult_defect", to_json(r.mult_defect)},
                {"free_defect", to_json(r.free_defect)},
                {"epsilon", to_json(r.epsilon)},
                {"passed", r.passed},
                {"witnesses",
                 {{"multiplicative", pair_or_null(r.mult_witness)},
                  {"free", optional_index(r.free_witness)}}}};
  }

  Json to_json(ApproxMap const& m, ApproxDomain const& d) {
    Json table = Json::array();
    for (auto const& p : m.table) {
      table.push_back(to_json(p));
    }
    Json products = Json::array();
    auto n        = d.finite_set.size();
    for (std::size_t i = 0; i < n; ++i) {
      products.push_back(std::vector<std::size_t>(d.products.begin() + static_cast<std::ptrdiff_t>(i * n),
                                                  d.products.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    }
    return Json{{"support", m.support},
                {"degree", m.degree},
                {"identity", m.identity},
                {"table", std::move(table)},
                {"ball", d.finite_set},
                {"products", std::move(products)}};
  }

  Json to_json(EmbeddingReport const& r) {
    return Json{{"embedding", r.name},
                {"radius", r.radius},
                {"ball", r.ball},
                {"images", r.images},
                {"multiplicative", r.multiplicative},
                {"injective", r.injective},
                {"pairs_checked", r.pairs_checked},
                {"witnesses",
                 {{"multiplicative", pair_or_null(r.multiplicative_witness)},
                  {"injective", pair_or_null(r.injective_witness)}}}};
  }

  Json to_json(CoSoficChain const& c) {
    Json stages = Json::array();
    for (auto const& s : c.stages()) {
      stages.push_back({{"outer", s.outer.elements()}, {"normal", s.normal.elements()}});
    }
    return Json{{"target", c.target().elements()}, {"stages", std::move(stages)}};
  }

  Json spec_to_json(AmalgamSpec const& spec) {
    Json factors = Json::array();
    for (std::size_t i = 0; i < spec.size(); ++i) {
      auto const& f = spec.factor(i);
      factors.push_back({{"id", i},
                         {"name", f.name()},
                         {"order", f.base()->order()},
                         {"z", f.has_z()},
                         {"embedding", f.embedding()}});
    }
    return Json{{"common_order", spec.common()->order()}, {"factors", std::move(factors)}};
  }

  Json certificate_to_json(BuildResult const& r, AmalgamSpec const& spec,
                           std::string const& input_digest) {
    auto const& c = r.certificate;
    Json        components = Json::array();
    for (auto const& a : c.components) {
      Json gens = Json::array();
      for (std::size_t f = 0; f < c.factor_generators.size(); ++f) {
        for (Element g : c.factor_generators[f]) {
          gens.push_back({{"factor", f}, {"element", g}, {"images", to_json(a.base_images[f][g])}});
        }
      }
      components.push_back({{"degree", a.degree}, {"generator_images", std::move(gens)}});
    }
    Json doc{{"input_digest", input_digest},
             {"complete", r.complete},
             {"radius", c.radius},
             {"epsilon", to_json(c.epsilon)},
             {"truncation_N", c.truncation},
             {"quotient",
              {{"components", std::move(components)},
               {"component_degree", c.component_degree},
               {"combined_degree", c.image_order}}}};
    doc["approx"] = c.approx ? to_json(*c.approx, c.domain) : Json(nullptr);
    doc["report"] = c.report ? to_json(*c.report) : Json(nullptr);
    Json unseparated = Json::array();
    for (auto const& nf : r.unseparated) {
      unseparated.push_back(to_json(spec, nf));
    }
    doc["unseparated"] = std::move(unseparated);
    doc["stats"]       = {{"nodes", c.stats.nodes},
                          {"degrees_tried", c.stats.degrees_tried},
                          {"components_added", c.stats.components_added},
                          {"components_pruned", c.stats.components_pruned},
                          {"budget_exhausted", c.stats.budget_exhausted},
                          {"ball_size", c.ball_size},
                          {"support_size", c.support.size()}};
    return doc;
  }

  std::string digest(Json const& instance) {
    auto const     text = nlohmann::json::parse(instance.dump()).dump();
    unsigned char  md[EVP_MAX_MD_SIZE];
    unsigned int   len = 0;
    EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr);
    std::ostringstream out;
    for (unsigned i = 0; i < len; ++i) {
      out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    }
    return out.str();
  }

}  // namespace sofic::io
