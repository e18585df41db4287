#include "sofic/amalgam.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_set>

#include "sofic/error.hpp"

namespace sofic {

  namespace {
    std::size_t combine(std::size_t seed, std::size_t v) noexcept {
      return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6U) + (seed >> 2U));
    }

    std::size_t hash_letter(std::size_t seed, Letter const& l) noexcept {
      seed = combine(seed, l.factor);
      seed = combine(seed, l.value.base);
      if (l.value.shift != 0) {
        seed = combine(seed, boost::multiprecision::hash_value(l.value.shift));
      }
      return seed;
    }

    // Non-negative m mod n.
    std::uint64_t reduce_mod(BigInt const& m, std::uint64_t n) {
      BigInt r = m % n;
      if (r < 0) {
        r += n;
      }
      return r.convert_to<std::uint64_t>();
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Factor
  ////////////////////////////////////////////////////////////////////////

  Factor::Factor(std::string          name,
                 GroupPtr             common,
                 GroupPtr             base,
                 std::vector<Element> embedding,
                 bool                 has_z)
      : _name(std::move(name)),
        _common(std::move(common)),
        _base(std::move(base)),
        _embedding(std::move(embedding)),
        _has_z(has_z) {
    auto const& c = *_common;
    auto const& a = *_base;
    if (_embedding.size() != c.order()) {
      throw Error(ErrorCode::invalid_argument,
                  "factor " + _name + ": embedding size differs from the common order");
    }
    _preimage.assign(a.order(), -1);
    for (Element x = 0; x < c.order(); ++x) {
      if (_embedding[x] >= a.order() || _preimage[_embedding[x]] != -1) {
        throw Error(ErrorCode::invalid_argument,
                    "factor " + _name + ": embedding is not injective");
      }
      _preimage[_embedding[x]] = x;
    }
    for (Element x = 0; x < c.order(); ++x) {
      for (Element y = 0; y < c.order(); ++y) {
        if (_embedding[c.mul(x, y)] != a.mul(_embedding[x], _embedding[y])) {
          throw Error(ErrorCode::invalid_argument,
                      "factor " + _name + ": embedding is not a homomorphism");
        }
      }
    }
    constexpr Element unset = static_cast<Element>(-1);
    _rep.assign(a.order(), unset);
    _head.assign(a.order(), 0);
    for (Element g = 0; g < a.order(); ++g) {
      if (_rep[g] != unset) {
        continue;
      }
      for (Element x = 0; x < c.order(); ++x) {
        Element y = a.mul(_embedding[x], g);
        _rep[y]   = g;
        _head[y]  = x;
      }
    }
  }

  FactorValue Factor::multiply(FactorValue const& a, FactorValue const& b) const {
    return {_base->mul(a.base, b.base), a.shift + b.shift};
  }

  FactorValue Factor::inverse(FactorValue const& a) const {
    return {_base->inv(a.base), -a.shift};
  }

  FactorValue Factor::embed(Element c) const {
    return {_embedding[c], 0};
  }

  std::optional<Element> Factor::common_part(FactorValue const& v) const {
    if (v.shift != 0 || _preimage[v.base] < 0) {
      return std::nullopt;
    }
    return static_cast<Element>(_preimage[v.base]);
  }

  std::pair<Element, FactorValue> Factor::split(FactorValue const& v) const {
    return {_head[v.base], FactorValue{_rep[v.base], v.shift}};
  }

  void Factor::validate(FactorValue const& v) const {
    if (v.base >= _base->order()) {
      throw Error(ErrorCode::malformed_letter,
                  "value " + std::to_string(v.base) + " outside factor " + _name
                      + " of order " + std::to_string(_base->order()));
    }
    if (!_has_z && v.shift != 0) {
      throw Error(ErrorCode::malformed_letter,
                  "nonzero exponent in factor " + _name + " without a Z coordinate");
    }
  }

  ////////////////////////////////////////////////////////////////////////
  // Graphs
  ////////////////////////////////////////////////////////////////////////

  SpanningForest spanning_forest(GraphSpec const& graph) {
    std::vector<int> ids = graph.vertices;
    std::sort(ids.begin(), ids.end());
    if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
      throw Error(ErrorCode::invalid_argument, "duplicate vertex id");
    }
    auto pos = [&](int v) {
      auto it = std::lower_bound(ids.begin(), ids.end(), v);
      if (it == ids.end() || *it != v) {
        throw Error(ErrorCode::invalid_argument,
                    "edge endpoint " + std::to_string(v) + " is not a vertex");
      }
      return static_cast<std::size_t>(it - ids.begin());
    };
    std::vector<std::vector<std::size_t>> incident(ids.size());
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      auto [u, v] = graph.edges[e];
      incident[pos(u)].push_back(e);
      if (u != v) {
        incident[pos(v)].push_back(e);
      }
    }
    SpanningForest    forest;
    forest.tree_edge.assign(graph.edges.size(), false);
    std::vector<bool> seen(ids.size(), false);
    for (std::size_t root = 0; root < ids.size(); ++root) {
      if (seen[root]) {
        continue;
      }
      ++forest.components;
      std::deque<std::size_t> queue{root};
      seen[root] = true;
      while (!queue.empty()) {
        std::size_t u = queue.front();
        queue.pop_front();
        for (std::size_t e : incident[u]) {
          auto [a, b]   = graph.edges[e];
          std::size_t w = pos(a) == u ? pos(b) : pos(a);
          if (!seen[w]) {
            seen[w]             = true;
            forest.tree_edge[e] = true;
            queue.push_back(w);
          }
        }
      }
    }
    return forest;
  }

  ////////////////////////////////////////////////////////////////////////
  // AmalgamSpec
  ////////////////////////////////////////////////////////////////////////

  AmalgamSpec::AmalgamSpec(GroupPtr common, std::vector<Factor> factors)
      : _common(std::move(common)), _factors(std::move(factors)) {
    if (_factors.empty()) {
      throw Error(ErrorCode::invalid_argument, "amalgam needs at least one factor");
    }
  }

  AmalgamSpec double_over(Subgroup const& sub, std::size_t copies, bool has_z) {
    auto                m = sub.as_group();
    std::vector<Factor> factors;
    for (std::size_t i = 0; i < copies; ++i) {
      factors.emplace_back("g" + std::to_string(i), m.group, sub.parent(), m.to_parent, has_z);
    }
    return AmalgamSpec(m.group, std::move(factors));
  }

  AmalgamSpec decompose_graph(GraphSpec const& graph, Subgroup const& h) {
    if (graph.vertices.empty()) {
      throw Error(ErrorCode::invalid_argument, "graph has no vertices");
    }
    auto forest = spanning_forest(graph);
    if (forest.components != 1) {
      throw Error(ErrorCode::disconnected_graph,
                  "disconnected graph: " + std::to_string(forest.components)
                      + " components");
    }
    std::vector<int> ids = graph.vertices;
    std::sort(ids.begin(), ids.end());

    auto                m = h.as_group();
    std::vector<Element> id(m.group->order());
    for (Element x = 0; x < id.size(); ++x) {
      id[x] = x;
    }
    GraphDecomposition dec;
    dec.graph     = graph;
    dec.tree_edge = forest.tree_edge;
    std::vector<Factor> factors;
    for (int v : ids) {
      dec.vertex_factor.push_back(factors.size());
      factors.emplace_back("v" + std::to_string(v), m.group, h.parent(), m.to_parent, false);
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
      if (forest.tree_edge[e]) {
        dec.edge_factor.emplace_back(std::nullopt);
        continue;
      }
      dec.edge_factor.emplace_back(factors.size());
      factors.emplace_back("e" + std::to_string(e), m.group, m.group, id, true);
    }
    AmalgamSpec spec(m.group, std::move(factors));
    spec.provenance = std::move(dec);
    return spec;
  }

  ////////////////////////////////////////////////////////////////////////
  // Normal forms
  ////////////////////////////////////////////////////////////////////////

  std::size_t NormalFormHash::operator()(NormalForm const& nf) const noexcept {
    std::size_t seed = nf.head;
    for (auto const& l : nf.letters) {
      seed = hash_letter(seed, l);
    }
    return seed;
  }

  std::size_t WordHash::operator()(Word const& w) const noexcept {
    std::size_t seed = w.size();
    for (auto const& l : w) {
      seed = hash_letter(seed, l);
    }
    return seed;
  }

  void check_word(AmalgamSpec const& spec, Word const& word) {
    for (auto const& l : word) {
      if (l.factor >= spec.size()) {
        throw Error(ErrorCode::spec_mismatch,
                    "factor id " + std::to_string(l.factor) + " not in the amalgam");
      }
      spec.factor(l.factor).validate(l.value);
    }
  }

  namespace {
    // nf stands for head . s_0 ... s_{end-1} . c . s_end ...; move c to the
    // head, rewriting each letter it crosses to its coset representative.
    void push_left(AmalgamSpec const& spec, NormalForm& nf, std::size_t end, Element c) {
      for (std::size_t j = end; j-- > 0 && c != identity_element;) {
        auto&       letter = nf.letters[j];
        auto const& f      = spec.factor(letter.factor);
        auto [c2, rep]     = f.split(f.multiply(letter.value, f.embed(c)));
        letter.value       = std::move(rep);
        c                  = c2;
      }
      nf.head = spec.common()->mul(nf.head, c);
    }

    void right_multiply(AmalgamSpec const& spec, NormalForm& nf, Letter const& x) {
      auto const& f = spec.factor(x.factor);
      std::size_t n = nf.letters.size();
      if (n > 0 && nf.letters.back().factor == x.factor) {
        auto [c, rep] = f.split(f.multiply(nf.letters.back().value, x.value));
        if (f.is_identity(rep)) {
          nf.letters.pop_back();
          push_left(spec, nf, n - 1, c);
        } else {
          nf.letters.back().value = std::move(rep);
          push_left(spec, nf, n - 1, c);
        }
      } else {
        auto [c, rep] = f.split(x.value);
        if (f.is_identity(rep)) {
          push_left(spec, nf, n, c);
        } else {
          nf.letters.push_back({x.factor, std::move(rep)});
          push_left(spec, nf, n, c);
        }
      }
    }

    void check_form(AmalgamSpec const& spec, NormalForm const& nf) {
      if (nf.head >= spec.common()->order()) {
        throw Error(ErrorCode::spec_mismatch, "head outside the common group");
      }
      check_word(spec, nf.letters);
    }
  }  // namespace

  NormalForm normalize(AmalgamSpec const& spec, Word const& word) {
    check_word(spec, word);
    NormalForm nf;
    for (auto const& l : word) {
      right_multiply(spec, nf, l);
    }
    return nf;
  }

  NormalForm multiply(AmalgamSpec const& spec, NormalForm const& a, NormalForm const& b) {
    check_form(spec, a);
    check_form(spec, b);
    NormalForm r = a;
    push_left(spec, r, r.letters.size(), b.head);
    for (auto const& l : b.letters) {
      right_multiply(spec, r, l);
    }
    return r;
  }

  NormalForm invert(AmalgamSpec const& spec, NormalForm const& a) {
    check_form(spec, a);
    NormalForm r;
    for (auto it = a.letters.rbegin(); it != a.letters.rend(); ++it) {
      auto const& f = spec.factor(it->factor);
      right_multiply(spec, r, Letter{it->factor, f.inverse(it->value)});
    }
    push_left(spec, r, r.letters.size(), spec.common()->inv(a.head));
    return r;
  }

  Word to_word(AmalgamSpec const& spec, NormalForm const& nf) {
    Word w;
    if (nf.head != identity_element) {
      w.push_back({0, spec.factor(0).embed(nf.head)});
    }
    w.insert(w.end(), nf.letters.begin(), nf.letters.end());
    return w;
  }

  Word inverse_word(AmalgamSpec const& spec, Word const& word) {
    Word w;
    w.reserve(word.size());
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
      w.push_back({it->factor, spec.factor(it->factor).inverse(it->value)});
    }
    return w;
  }

  bool is_normal_form(AmalgamSpec const& spec, NormalForm const& nf) {
    if (nf.head >= spec.common()->order()) {
      return false;
    }
    for (std::size_t i = 0; i < nf.letters.size(); ++i) {
      auto const& l = nf.letters[i];
      if (l.factor >= spec.size()) {
        return false;
      }
      auto const& f = spec.factor(l.factor);
      if (l.value.base >= f.base()->order() || (!f.has_z() && l.value.shift != 0)) {
        return false;
      }
      if (f.is_identity(l.value) || !f.is_transversal(l.value)) {
        return false;
      }
      if (i > 0 && nf.letters[i - 1].factor == l.factor) {
        return false;
      }
    }
    return true;
  }

  bool is_standard_form(AmalgamSpec const& spec, Word const& word) {
    for (std::size_t i = 0; i < word.size(); ++i) {
      auto const& l = word[i];
      if (l.factor >= spec.size()) {
        return false;
      }
      auto const& f = spec.factor(l.factor);
      if (l.value.base >= f.base()->order() || (!f.has_z() && l.value.shift != 0)) {
        return false;
      }
      if (f.common_part(l.value)) {
        return false;
      }
      if (i > 0 && word[i - 1].factor == l.factor) {
        return false;
      }
    }
    return true;
  }

  std::vector<Letter> default_alphabet(AmalgamSpec const& spec) {
    std::vector<Letter> out;
    for (std::size_t i = 0; i < spec.size(); ++i) {
      auto const& f = spec.factor(i);
      for (Element a = 1; a < f.base()->order(); ++a) {
        out.push_back({i, {a, 0}});
      }
      if (f.has_z()) {
        out.push_back({i, {identity_element, 1}});
        out.push_back({i, {identity_element, -1}});
      }
    }
    return out;
  }

  std::vector<NormalForm> ball(AmalgamSpec const&         spec,
                               std::vector<Letter> const& letters,
                               std::size_t                radius,
                               Caps const&                caps,
                               Execution                  exec) {
    check_word(spec, letters);
    // Close the alphabet under inverses, keeping first-seen order.
    std::vector<Letter> alphabet;
    {
      auto add = [&](Letter const& l) {
        if (std::find(alphabet.begin(), alphabet.end(), l) == alphabet.end()) {
          alphabet.push_back(l);
        }
      };
      for (auto const& l : letters) {
        add(l);
        add({l.factor, spec.factor(l.factor).inverse(l.value)});
      }
    }
    std::vector<NormalForm>                                 all{NormalForm{}};
    std::unordered_set<NormalForm, NormalFormHash>          seen{NormalForm{}};
    std::size_t                                             level_begin = 0;
    for (std::size_t r = 1; r <= radius; ++r) {
      std::size_t const                    level_end = all.size();
      std::size_t const                    width     = level_end - level_begin;
      std::vector<std::vector<NormalForm>> next(width);
      auto expand = [&](std::size_t i) {
        auto& out = next[i];
        out.reserve(alphabet.size());
        for (auto const& l : alphabet) {
          NormalForm nf = all[level_begin + i];
          right_multiply(spec, nf, l);
          out.push_back(std::move(nf));
        }
      };
      if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t i = 0; i < width; ++i) {
          expand(i);
        }
      } else {
        for (std::size_t i = 0; i < width; ++i) {
          expand(i);
        }
      }
      for (auto& batch : next) {
        for (auto& nf : batch) {
          if (seen.insert(nf).second) {
            if (all.size() >= caps.max_ball_size) {
              throw Error(ErrorCode::ball_too_large,
                          "ball size exceeds cap " + std::to_string(caps.max_ball_size));
            }
            all.push_back(std::move(nf));
          }
        }
      }
      level_begin = level_end;
    }
    return all;
  }

  ////////////////////////////////////////////////////////////////////////
  // AmalgamAction
  ////////////////////////////////////////////////////////////////////////

  Permutation AmalgamAction::image(AmalgamSpec const& spec, Letter const& letter) const {
    auto const& img = base_images.at(letter.factor).at(letter.value.base);
    if (letter.value.shift == 0) {
      return img;
    }
    auto const& shift = shift_images.at(letter.factor);
    if (!shift) {
      throw Error(ErrorCode::spec_mismatch,
                  "exponent on factor " + spec.factor(letter.factor).name()
                      + " without a shift image");
    }
    return img * power(*shift, reduce_mod(letter.value.shift, order(*shift)));
  }

  Permutation AmalgamAction::image(AmalgamSpec const& spec, Word const& word) const {
    Permutation p = Permutation::identity(degree);
    for (auto const& l : word) {
      p = p * image(spec, l);
    }
    return p;
  }

  Permutation AmalgamAction::image(AmalgamSpec const& spec, NormalForm const& nf) const {
    Permutation p = base_images.at(0).at(spec.factor(0).embedding()[nf.head]);
    for (auto const& l : nf.letters) {
      p = p * image(spec, l);
    }
    return p;
  }

  std::optional<std::string> AmalgamAction::check(AmalgamSpec const& spec) const {
    if (base_images.size() != spec.size() || shift_images.size() != spec.size()) {
      return "factor count mismatch";
    }
    auto const& common = *spec.common();
    for (std::size_t i = 0; i < spec.size(); ++i) {
      auto const& f    = spec.factor(i);
      auto const& a    = *f.base();
      auto const& imgs = base_images[i];
      if (imgs.size() != a.order()) {
        return "factor " + f.name() + ": image count mismatch";
      }
      for (auto const& p : imgs) {
        if (p.degree() != degree) {
          return "factor " + f.name() + ": image of wrong degree";
        }
      }
      for (Element x = 0; x < a.order(); ++x) {
        for (Element y = 0; y < a.order(); ++y) {
          if (imgs[a.mul(x, y)] != imgs[x] * imgs[y]) {
            return "factor " + f.name() + ": not multiplicative at (" + a.label(x)
                   + ", " + a.label(y) + ")";
          }
        }
      }
      for (Element c = 0; c < common.order(); ++c) {
        if (imgs[f.embedding()[c]]
            != base_images[0][spec.factor(0).embedding()[c]]) {
          return "factor " + f.name() + ": disagrees on common element "
                 + common.label(c);
        }
      }
      if (f.has_z() != shift_images[i].has_value()) {
        return "factor " + f.name() + ": shift image presence mismatch";
      }
      if (shift_images[i]) {
        auto const& s = *shift_images[i];
        if (s.degree() != degree) {
          return "factor " + f.name() + ": shift of wrong degree";
        }
        for (auto const& p : imgs) {
          if (p * s != s * p) {
            return "factor " + f.name() + ": shift does not commute with the base";
          }
        }
      }
    }
    return std::nullopt;
  }

  AmalgamAction disjoint_union(std::vector<AmalgamAction> const& parts) {
    AmalgamAction out;
    if (parts.empty()) {
      return out;
    }
    std::size_t const nf = parts.front().base_images.size();
    for (auto const& p : parts) {
      out.degree += p.degree;
    }
    auto glue = [&](auto const& pick) {
      std::vector<Point> images;
      images.reserve(out.degree);
      Point offset = 0;
      for (auto const& p : parts) {
        Permutation const& q = pick(p);
        for (Point x : q.images()) {
          images.push_back(x + offset);
        }
        offset += static_cast<Point>(p.degree);
      }
      return Permutation(std::move(images));
    };
    out.base_images.resize(nf);
    out.shift_images.resize(nf);
    for (std::size_t i = 0; i < nf; ++i) {
      for (std::size_t a = 0; a < parts.front().base_images[i].size(); ++a) {
        out.base_images[i].push_back(
            glue([&](AmalgamAction const& p) -> Permutation const& {
              return p.base_images[i][a];
            }));
      }
      if (parts.front().shift_images[i]) {
        out.shift_images[i] = glue([&](AmalgamAction const& p) -> Permutation const& {
          return *p.shift_images[i];
        });
      }
    }
    return out;
  }

  std::string to_string(AmalgamSpec const& spec, NormalForm const& nf) {
    std::string s = spec.common()->label(nf.head);
    for (auto const& l : nf.letters) {
      auto const& f = spec.factor(l.factor);
      s += " " + f.name() + ":" + f.base()->label(l.value.base);
      if (f.has_z()) {
        s += "^" + l.value.shift.str();
      }
    }
    return s;
  }

}  // namespace sofic
