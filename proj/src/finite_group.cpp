#include "sofic/finite_group.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "sofic/error.hpp"

namespace sofic {

  namespace {
    void check_order_cap(std::size_t order, Caps const& caps) {
      if (order > caps.max_group_order) {
        throw Error(ErrorCode::group_too_large,
                    "group too large: order exceeds cap "
                        + std::to_string(caps.max_group_order));
      }
    }

    std::vector<std::string> default_labels(std::size_t n) {
      std::vector<std::string> labels(n);
      for (std::size_t i = 0; i < n; ++i) {
        labels[i] = std::to_string(i);
      }
      return labels;
    }

    std::vector<bool> membership(std::size_t n, std::vector<Element> const& s) {
      std::vector<bool> m(n, false);
      for (Element x : s) {
        m[x] = true;
      }
      return m;
    }

    // Subgroup generated by `gens`: closure of the identity under right
    // multiplication (finite, so inverses come for free).
    std::vector<Element> closure(FiniteGroup const&       g,
                                 std::span<Element const> gens) {
      std::vector<bool>    seen(g.order(), false);
      std::vector<Element> out{identity_element};
      seen[identity_element] = true;
      for (std::size_t i = 0; i < out.size(); ++i) {
        for (Element s : gens) {
          Element y = g.mul(out[i], s);
          if (!seen[y]) {
            seen[y] = true;
            out.push_back(y);
          }
        }
      }
      std::sort(out.begin(), out.end());
      return out;
    }
  }  // namespace

  GroupPtr GroupBuilder::make(std::size_t              order,
                              std::vector<Element>     mul,
                              std::vector<std::string> labels) {
    auto g    = std::shared_ptr<FiniteGroup>(new FiniteGroup());
    g->_order = order;
    g->_mul   = std::move(mul);
    g->_inv.assign(order, 0);
    for (Element a = 0; a < order; ++a) {
      for (Element b = 0; b < order; ++b) {
        if (g->mul(a, b) == identity_element) {
          g->_inv[a] = b;
          break;
        }
      }
    }
    g->_labels = labels.empty() ? default_labels(order) : std::move(labels);
    return g;
  }

  GroupPtr FiniteGroup::from_table(std::vector<std::vector<Element>> const& table,
                                   std::vector<std::string> labels,
                                   Caps const&              caps) {
    std::size_t n = table.size();
    if (n == 0) {
      throw Error(ErrorCode::not_a_group, "empty multiplication table");
    }
    check_order_cap(n, caps);
    if (!labels.empty() && labels.size() != n) {
      throw Error(ErrorCode::invalid_argument, "label count does not match order");
    }
    std::vector<Element> mul;
    mul.reserve(n * n);
    for (auto const& row : table) {
      if (row.size() != n) {
        throw Error(ErrorCode::not_a_group, "multiplication table is not square");
      }
      std::vector<bool> seen(n, false);
      for (Element x : row) {
        if (x >= n || seen[x]) {
          throw Error(ErrorCode::not_a_group,
                      "multiplication table row is not a permutation");
        }
        seen[x] = true;
        mul.push_back(x);
      }
    }
    for (std::size_t j = 0; j < n; ++j) {
      std::vector<bool> seen(n, false);
      for (std::size_t i = 0; i < n; ++i) {
        Element x = mul[i * n + j];
        if (seen[x]) {
          throw Error(ErrorCode::not_a_group,
                      "multiplication table column is not a permutation");
        }
        seen[x] = true;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (mul[i] != i || mul[i * n] != i) {
        throw Error(ErrorCode::not_a_group, "element 0 is not the identity");
      }
    }
    auto g = GroupBuilder::make(n, std::move(mul), std::move(labels));
    if (!g->satisfies_axioms()) {
      throw Error(ErrorCode::not_a_group, "multiplication is not associative");
    }
    return g;
  }

  std::vector<std::vector<Element>> FiniteGroup::table() const {
    std::vector<std::vector<Element>> t(_order, std::vector<Element>(_order));
    for (Element a = 0; a < _order; ++a) {
      for (Element b = 0; b < _order; ++b) {
        t[a][b] = mul(a, b);
      }
    }
    return t;
  }

  bool FiniteGroup::satisfies_axioms() const {
    for (Element a = 0; a < _order; ++a) {
      if (mul(0, a) != a || mul(a, 0) != a) {
        return false;
      }
      if (mul(a, inv(a)) != 0 || mul(inv(a), a) != 0) {
        return false;
      }
    }
    for (Element a = 0; a < _order; ++a) {
      for (Element b = 0; b < _order; ++b) {
        Element ab = mul(a, b);
        for (Element c = 0; c < _order; ++c) {
          if (mul(ab, c) != mul(a, mul(b, c))) {
            return false;
          }
        }
      }
    }
    return true;
  }

  std::size_t FiniteGroup::element_order(Element a) const {
    std::size_t k = 1;
    for (Element x = a; x != identity_element; x = mul(x, a)) {
      ++k;
    }
    return k;
  }

  std::vector<Element> FiniteGroup::generators(std::span<Element const> fixed) const {
    std::vector<Element> all(fixed.begin(), fixed.end());
    std::vector<Element> gens;
    auto              current = closure(*this, all);
    std::vector<bool> member  = membership(_order, current);
    for (Element g = 0; g < _order && current.size() < _order; ++g) {
      if (member[g]) {
        continue;
      }
      gens.push_back(g);
      all.push_back(g);
      current = closure(*this, all);
      member  = membership(_order, current);
    }
    return gens;
  }

  PermutationGroup from_permutation_generators(std::span<Permutation const> gens,
                                               std::size_t                  degree,
                                               Caps const&                  caps) {
    if (degree == 0) {
      throw Error(ErrorCode::invalid_argument, "permutation degree must be positive");
    }
    if (degree > caps.max_degree) {
      throw Error(ErrorCode::degree_too_large, "permutation degree exceeds cap");
    }
    for (auto const& s : gens) {
      if (s.degree() != degree) {
        throw Error(ErrorCode::degree_mismatch,
                    "generator of degree " + std::to_string(s.degree())
                        + " in a group of degree " + std::to_string(degree));
      }
    }
    std::vector<Permutation> elems{Permutation::identity(degree)};
    std::unordered_map<Permutation, Element, PermutationHash> index;
    index.emplace(elems[0], 0);
    // parent[j] = (k, s) with elems[j] == elems[k] * gens[s]
    std::vector<std::pair<Element, std::size_t>> parent{{0, 0}};
    std::vector<std::vector<Element>>            rmul;
    std::size_t const                            ngens = gens.size();
    for (std::size_t i = 0; i < elems.size(); ++i) {
      rmul.emplace_back(ngens);
      for (std::size_t s = 0; s < ngens; ++s) {
        Permutation y  = elems[i] * gens[s];
        auto        it = index.find(y);
        if (it == index.end()) {
          if (elems.size() >= caps.max_group_order) {
            throw Error(ErrorCode::group_too_large,
                        "group too large: closure exceeds cap "
                            + std::to_string(caps.max_group_order));
          }
          it = index.emplace(y, static_cast<Element>(elems.size())).first;
          elems.push_back(std::move(y));
          parent.emplace_back(static_cast<Element>(i), s);
        }
        rmul[i][s] = it->second;
      }
    }
    std::size_t const    n = elems.size();
    std::vector<Element> mul(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      mul[i * n] = static_cast<Element>(i);
      for (std::size_t j = 1; j < n; ++j) {
        auto [k, s]    = parent[j];
        mul[i * n + j] = rmul[mul[i * n + k]][s];
      }
    }
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      std::string l = "[";
      for (std::size_t x = 0; x < degree; ++x) {
        l += (x ? "," : "") + std::to_string(elems[i](static_cast<Point>(x)));
      }
      labels[i] = l + "]";
    }
    return {GroupBuilder::make(n, std::move(mul), std::move(labels)),
            std::move(elems)};
  }

  GroupPtr cyclic_group(std::size_t n) {
    if (n == 0) {
      throw Error(ErrorCode::invalid_argument, "cyclic group of order 0");
    }
    std::vector<Element> mul(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        mul[a * n + b] = static_cast<Element>((a + b) % n);
      }
    }
    return GroupBuilder::make(n, std::move(mul), {});
  }

  GroupPtr symmetric_group(std::size_t n, Caps const& caps) {
    std::vector<Permutation> gens;
    if (n >= 2) {
      std::vector<Point> t(n), c(n);
      std::iota(t.begin(), t.end(), Point{0});
      std::swap(t[0], t[1]);
      for (std::size_t i = 0; i < n; ++i) {
        c[i] = static_cast<Point>((i + 1) % n);
      }
      gens.emplace_back(std::move(t));
      gens.emplace_back(std::move(c));
    }
    return from_permutation_generators(gens, std::max<std::size_t>(n, 1), caps)
        .group;
  }

  ////////////////////////////////////////////////////////////////////////
  // Subgroup
  ////////////////////////////////////////////////////////////////////////

  Subgroup Subgroup::from_elements(GroupPtr parent, std::vector<Element> elems) {
    std::sort(elems.begin(), elems.end());
    elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
    if (elems.empty() || elems.front() != identity_element) {
      throw Error(ErrorCode::not_a_subgroup, "subgroup must contain the identity");
    }
    if (elems.back() >= parent->order()) {
      throw Error(ErrorCode::not_a_subgroup, "subgroup element out of range");
    }
    auto member = membership(parent->order(), elems);
    for (Element a : elems) {
      for (Element b : elems) {
        if (!member[parent->mul(a, b)]) {
          throw Error(ErrorCode::not_a_subgroup,
                      "element set is not closed under multiplication");
        }
      }
    }
    Subgroup h;
    h._parent   = std::move(parent);
    h._elements = std::move(elems);
    h._member   = std::move(member);
    return h;
  }

  Subgroup Subgroup::generated_by(GroupPtr parent, std::span<Element const> gens) {
    for (Element g : gens) {
      if (g >= parent->order()) {
        throw Error(ErrorCode::not_a_subgroup, "generator out of range");
      }
    }
    Subgroup h;
    h._elements = closure(*parent, gens);
    h._member   = membership(parent->order(), h._elements);
    h._parent   = std::move(parent);
    return h;
  }

  Subgroup Subgroup::whole(GroupPtr parent) {
    std::vector<Element> all(parent->order());
    std::iota(all.begin(), all.end(), Element{0});
    Subgroup h;
    h._member.assign(parent->order(), true);
    h._elements = std::move(all);
    h._parent   = std::move(parent);
    return h;
  }

  Subgroup Subgroup::trivial(GroupPtr parent) {
    Subgroup h;
    h._member.assign(parent->order(), false);
    h._member[identity_element] = true;
    h._elements                 = {identity_element};
    h._parent                   = std::move(parent);
    return h;
  }

  bool Subgroup::is_subset_of(Subgroup const& other) const {
    if (_parent != other._parent) {
      return false;
    }
    return std::all_of(_elements.begin(), _elements.end(), [&](Element x) {
      return other.contains(x);
    });
  }

  bool Subgroup::is_normal() const {
    for (Element g = 0; g < _parent->order(); ++g) {
      for (Element x : _elements) {
        if (!contains(_parent->conj(g, x))) {
          return false;
        }
      }
    }
    return true;
  }

  Subgroup::Materialized Subgroup::as_group() const {
    std::size_t const    n = _elements.size();
    std::vector<Element> pos(_parent->order(), 0);
    for (std::size_t i = 0; i < n; ++i) {
      pos[_elements[i]] = static_cast<Element>(i);
    }
    std::vector<Element>     mul(n * n);
    std::vector<std::string> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = _parent->label(_elements[i]);
      for (std::size_t j = 0; j < n; ++j) {
        mul[i * n + j] = pos[_parent->mul(_elements[i], _elements[j])];
      }
    }
    return {GroupBuilder::make(n, std::move(mul), std::move(labels)), _elements};
  }

  Subgroup intersection(Subgroup const& a, Subgroup const& b) {
    if (a.parent() != b.parent()) {
      throw Error(ErrorCode::invalid_argument,
                  "intersection of subgroups of different groups");
    }
    std::vector<Element> common;
    std::set_intersection(a.elements().begin(),
                          a.elements().end(),
                          b.elements().begin(),
                          b.elements().end(),
                          std::back_inserter(common));
    return Subgroup::from_elements(a.parent(), std::move(common));
  }

  Subgroup normal_core(Subgroup const& h) {
    auto const&          g = *h.parent();
    std::vector<Element> core;
    for (Element x : h.elements()) {
      // x lies in every gHg^-1 iff g^-1 x g lies in H for every g.
      bool in_all = true;
      for (Element y = 0; y < g.order() && in_all; ++y) {
        in_all = h.contains(g.conj(g.inv(y), x));
      }
      if (in_all) {
        core.push_back(x);
      }
    }
    return Subgroup::from_elements(h.parent(), std::move(core));
  }

  std::vector<Element> right_coset_representatives(Subgroup const& h) {
    auto const&          g = *h.parent();
    constexpr Element    unset = static_cast<Element>(-1);
    std::vector<Element> rep(g.order(), unset);
    for (Element x = 0; x < g.order(); ++x) {
      if (rep[x] != unset) {
        continue;
      }
      for (Element y : h.elements()) {
        rep[g.mul(y, x)] = x;
      }
    }
    return rep;
  }

  std::vector<Element> right_coset_transversal(Subgroup const& h) {
    auto                 rep = right_coset_representatives(h);
    std::vector<Element> out;
    for (Element x = 0; x < rep.size(); ++x) {
      if (rep[x] == x) {
        out.push_back(x);
      }
    }
    return out;
  }

  QuotientMap quotient(Subgroup const& n, Caps const& caps) {
    auto const& g = *n.parent();
    for (Element y = 0; y < g.order(); ++y) {
      for (Element x : n.elements()) {
        if (!n.contains(g.conj(y, x))) {
          throw Error(ErrorCode::not_normal,
                      "not normal: conjugate of " + g.label(x) + " by "
                          + g.label(y) + " leaves the subgroup");
        }
      }
    }
    auto reps = right_coset_transversal(n);
    auto rep  = right_coset_representatives(n);
    check_order_cap(reps.size(), caps);
    std::vector<Element> pos(g.order(), 0);
    for (std::size_t i = 0; i < reps.size(); ++i) {
      pos[reps[i]] = static_cast<Element>(i);
    }
    QuotientMap q;
    q.source = n.parent();
    q.kernel = n;
    q.table.resize(g.order());
    for (Element x = 0; x < g.order(); ++x) {
      q.table[x] = pos[rep[x]];
    }
    std::size_t const        m = reps.size();
    std::vector<Element>     mul(m * m);
    std::vector<std::string> labels(m);
    for (std::size_t a = 0; a < m; ++a) {
      labels[a] = g.label(reps[a]) + "N";
      for (std::size_t b = 0; b < m; ++b) {
        mul[a * m + b] = q.table[g.mul(reps[a], reps[b])];
      }
    }
    q.target  = GroupBuilder::make(m, std::move(mul), std::move(labels));
    q.section = std::move(reps);
    return q;
  }

  std::vector<Permutation> left_regular_rep(FiniteGroup const& g) {
    std::vector<Permutation> out;
    out.reserve(g.order());
    for (Element a = 0; a < g.order(); ++a) {
      std::vector<Point> images(g.order());
      for (Element x = 0; x < g.order(); ++x) {
        images[x] = g.mul(a, x);
      }
      out.emplace_back(std::move(images));
    }
    return out;
  }

  DirectProduct direct_product(GroupPtr const& g1,
                               GroupPtr const& g2,
                               Caps const&     caps) {
    std::size_t const n1 = g1->order(), n2 = g2->order();
    if (n2 != 0 && n1 > caps.max_group_order / n2) {
      throw Error(ErrorCode::group_too_large,
                  "group too large: direct product exceeds cap "
                      + std::to_string(caps.max_group_order));
    }
    std::size_t const        n = n1 * n2;
    std::vector<Element>     mul(n * n);
    std::vector<std::string> labels(n);
    DirectProduct            p;
    p.second_order = n2;
    p.first.resize(n);
    p.second.resize(n);
    for (std::size_t x = 0; x < n; ++x) {
      p.first[x]  = static_cast<Element>(x / n2);
      p.second[x] = static_cast<Element>(x % n2);
      labels[x]   = "(" + g1->label(p.first[x]) + "," + g2->label(p.second[x]) + ")";
    }
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y = 0; y < n; ++y) {
        mul[x * n + y] = p.pair(g1->mul(p.first[x], p.first[y]),
                                g2->mul(p.second[x], p.second[y]));
      }
    }
    p.group = GroupBuilder::make(n, std::move(mul), std::move(labels));
    return p;
  }

  Subgroup product_subgroup(DirectProduct const& p,
                            Subgroup const&      a,
                            Subgroup const&      b) {
    std::vector<Element> elems;
    for (Element x : a.elements()) {
      for (Element y : b.elements()) {
        elems.push_back(p.pair(x, y));
      }
    }
    return Subgroup::from_elements(p.group, std::move(elems));
  }

  ////////////////////////////////////////////////////////////////////////
  // CoSoficChain
  ////////////////////////////////////////////////////////////////////////

  std::optional<std::string> CoSoficChain::check(Subgroup const&           target,
                                                 std::vector<Stage> const& stages) {
    if (stages.empty()) {
      return "chain has no stages";
    }
    auto const& parent = target.parent();
    std::vector<bool> in_all(parent->order(), true);
    for (std::size_t i = 0; i < stages.size(); ++i) {
      auto const& s   = stages[i];
      auto        tag = "stage " + std::to_string(i) + ": ";
      if (s.outer.parent() != parent || s.normal.parent() != parent) {
        return tag + "subgroups of a different parent";
      }
      if (!s.normal.is_subset_of(s.outer)) {
        return tag + "normal part not contained in outer part";
      }
      if (!s.normal.is_normal()) {
        return tag + "normal part is not normal in the parent";
      }
      if (i > 0) {
        if (!s.outer.is_subset_of(stages[i - 1].outer)) {
          return tag + "outer chain is not decreasing";
        }
        if (!s.normal.is_subset_of(stages[i - 1].normal)) {
          return tag + "normal chain is not decreasing";
        }
      }
      for (Element x = 0; x < parent->order(); ++x) {
        in_all[x] = in_all[x] && s.outer.contains(x);
      }
    }
    for (Element x = 0; x < parent->order(); ++x) {
      if (in_all[x] != target.contains(x)) {
        return "intersection of outer stages differs from the target at element "
               + parent->label(x);
      }
    }
    return std::nullopt;
  }

  CoSoficChain::CoSoficChain(Subgroup target, std::vector<Stage> stages)
      : _target(std::move(target)), _stages(std::move(stages)) {
    if (auto err = check(_target, _stages)) {
      throw Error(ErrorCode::invalid_stage, *err);
    }
  }

  CoSoficChain CoSoficChain::from_normal_core(Subgroup const& h) {
    return CoSoficChain(h, {Stage{h, normal_core(h)}});
  }

  ChainProduct chain_product(CoSoficChain const& c1,
                             CoSoficChain const& c2,
                             Caps const&         caps) {
    auto        p   = direct_product(c1.parent(), c2.parent(), caps);
    std::size_t len = std::max(c1.size(), c2.size());
    std::vector<CoSoficChain::Stage> stages;
    for (std::size_t i = 0; i < len; ++i) {
      auto const& s1 = c1.stages()[std::min(i, c1.size() - 1)];
      auto const& s2 = c2.stages()[std::min(i, c2.size() - 1)];
      stages.push_back({product_subgroup(p, s1.outer, s2.outer),
                        product_subgroup(p, s1.normal, s2.normal)});
    }
    auto target = product_subgroup(p, c1.target(), c2.target());
    return {p, CoSoficChain(std::move(target), std::move(stages))};
  }

}  // namespace sofic
