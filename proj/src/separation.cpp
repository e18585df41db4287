#include <algorithm>
#include <map>
#include <set>

#include "sofic/builder.hpp"

namespace sofic {

  namespace {

    constexpr int undefined = -1;

    // A transitive action type of the common group: its action on the left
    // cosets of a subgroup L.
    struct OrbitKind {
      std::size_t                     size = 0;
      std::vector<std::vector<Point>> action;  // action[c][coset]
    };

    std::vector<OrbitKind> orbit_kinds(GroupPtr const& common) {
      auto const&                       c = *common;
      std::set<std::vector<Element>>    seen;
      std::vector<std::vector<Element>> subgroups;
      std::vector<std::vector<Element>> queue{{identity_element}};
      seen.insert(queue.front());
      for (std::size_t i = 0; i < queue.size(); ++i) {
        auto s = queue[i];
        subgroups.push_back(s);
        for (Element x = 0; x < c.order(); ++x) {
          if (std::binary_search(s.begin(), s.end(), x)) {
            continue;
          }
          auto gens = s;
          gens.push_back(x);
          auto t = Subgroup::generated_by(common, gens).elements();
          if (seen.insert(t).second) {
            queue.push_back(std::move(t));
          }
        }
      }
      std::sort(subgroups.begin(), subgroups.end(), [](auto const& a, auto const& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });

      std::vector<std::vector<Element>> reps;
      for (auto const& s : subgroups) {
        bool fresh = true;
        for (auto const& r : reps) {
          if (r.size() != s.size()) {
            continue;
          }
          for (Element g = 0; g < c.order() && fresh; ++g) {
            std::vector<Element> conj;
            for (Element x : r) {
              conj.push_back(c.conj(g, x));
            }
            std::sort(conj.begin(), conj.end());
            fresh = conj != s;
          }
          if (!fresh) {
            break;
          }
        }
        if (fresh) {
          reps.push_back(s);
        }
      }

      std::vector<OrbitKind> kinds;
      for (auto const& l : reps) {
        std::vector<long>    coset(c.order(), -1);
        std::vector<Element> first;
        for (Element x = 0; x < c.order(); ++x) {
          if (coset[x] >= 0) {
            continue;
          }
          for (Element y : l) {
            coset[c.mul(x, y)] = static_cast<long>(first.size());
          }
          first.push_back(x);
        }
        OrbitKind k;
        k.size = first.size();
        k.action.assign(c.order(), std::vector<Point>(k.size));
        for (Element g = 0; g < c.order(); ++g) {
          for (std::size_t i = 0; i < k.size; ++i) {
            k.action[g][i] = static_cast<Point>(coset[c.mul(g, first[i])]);
          }
        }
        kinds.push_back(std::move(k));
      }
      return kinds;
    }

    // Multisets of orbit kinds (non-decreasing kind index) of total size d.
    void action_types(std::vector<OrbitKind> const&          kinds,
                      std::size_t                             d,
                      std::size_t                             from,
                      std::vector<std::size_t>&               cur,
                      std::vector<std::vector<std::size_t>>& out) {
      if (d == 0) {
        out.push_back(cur);
        return;
      }
      for (std::size_t k = from; k < kinds.size(); ++k) {
        if (kinds[k].size <= d) {
          cur.push_back(k);
          action_types(kinds, d - kinds[k].size, k, cur, out);
          cur.pop_back();
        }
      }
    }

    std::vector<std::vector<Point>> type_action(std::vector<OrbitKind> const& kinds,
                                                std::vector<std::size_t> const& type,
                                                std::size_t                     corder) {
      std::vector<std::vector<Point>> rho(corder);
      for (std::size_t c = 0; c < corder; ++c) {
        Point offset = 0;
        for (auto k : type) {
          for (Point x : kinds[k].action[c]) {
            rho[c].push_back(x + offset);
          }
          offset += static_cast<Point>(kinds[k].size);
        }
      }
      return rho;
    }

    struct FactorClass {
      GroupPtr             base;
      std::vector<Element> embedding;
      std::vector<Element> generators;  // beyond the image of the common group
    };

    using Extension = std::vector<Permutation>;  // image of every base element

    struct Fact {
      Element a;
      int     x;
      int     y;
    };

    // Partial action of A on d points: act[a * d + x] and its inverse.
    struct PartialAction {
      std::vector<int> act;
      std::vector<int> pre;
    };

    bool propagate(FiniteGroup const& a, std::size_t d, PartialAction& s, std::vector<Fact>& queue) {
      auto const n = a.order();
      while (!queue.empty()) {
        auto f = queue.back();
        queue.pop_back();
        auto& cur = s.act[f.a * d + f.x];
        if (cur == f.y) {
          continue;
        }
        if (cur != undefined || s.pre[f.a * d + f.y] != undefined) {
          return false;
        }
        cur                     = f.y;
        s.pre[f.a * d + f.y]    = f.x;
        for (Element b = 0; b < n; ++b) {
          if (int z = s.act[b * d + f.y]; z != undefined) {
            queue.push_back({a.mul(b, f.a), f.x, z});
          }
          if (int w = s.pre[b * d + f.x]; w != undefined) {
            queue.push_back({a.mul(f.a, b), w, f.y});
          }
        }
      }
      return true;
    }

    class Search {
     public:
      Search(AmalgamSpec const& spec, SearchOptions const& options, SearchStats& stats)
          : _spec(spec), _options(options), _stats(stats), _kinds(orbit_kinds(spec.common())) {
        for (std::size_t i = 0; i < spec.size(); ++i) {
          auto const& f = spec.factor(i);
          if (f.has_z()) {
            throw Error(ErrorCode::invalid_argument,
                        "separation needs finite factors; truncate first");
          }
          std::size_t k = 0;
          for (; k < _classes.size(); ++k) {
            if (_classes[k].base == f.base() && _classes[k].embedding == f.embedding()) {
              break;
            }
          }
          if (k == _classes.size()) {
            _classes.push_back({f.base(), f.embedding(), f.base()->generators(f.embedding())});
          }
          _class_of.push_back(k);
          _max_order = std::max(_max_order, f.base()->order());
        }
      }

      bool exhausted() const noexcept {
        return _stats.budget_exhausted;
      }

      std::optional<AmalgamAction> find(NormalForm const& target) {
        std::size_t const max_degree =
            _options.max_degree ? _options.max_degree : 4 * _max_order;
        std::vector<std::size_t> used;
        for (auto const& l : target.letters) {
          if (std::find(used.begin(), used.end(), l.factor) == used.end()) {
            used.push_back(l.factor);
          }
        }
        for (std::size_t d = std::max<std::size_t>(_options.min_degree, 1); d <= max_degree; ++d) {
          auto& tried = _stats.degrees_tried;
          if (std::find(tried.begin(), tried.end(), d) == tried.end()) {
            tried.push_back(d);
          }
          auto const& types = types_of(d);
          for (std::size_t ti = 0; ti < types.size(); ++ti) {
            if (auto hit = try_type(target, used, d, ti)) {
              return hit;
            }
            if (exhausted()) {
              return std::nullopt;
            }
          }
        }
        return std::nullopt;
      }

     private:
      bool spend() {
        if (_stats.nodes >= _options.budget) {
          _stats.budget_exhausted = true;
          return false;
        }
        ++_stats.nodes;
        return true;
      }

      std::vector<std::vector<std::size_t>> const& types_of(std::size_t d) {
        auto it = _types.find(d);
        if (it == _types.end()) {
          std::vector<std::vector<std::size_t>> out;
          std::vector<std::size_t>              cur;
          action_types(_kinds, d, 0, cur, out);
          it = _types.emplace(d, std::move(out)).first;
        }
        return it->second;
      }

      std::vector<std::vector<Point>> const& rho_of(std::size_t d, std::size_t ti) {
        auto key = std::pair{d, ti};
        auto it  = _rho.find(key);
        if (it == _rho.end()) {
          it = _rho.emplace(key, type_action(_kinds, types_of(d)[ti], _spec.common()->order()))
                   .first;
        }
        return it->second;
      }

      // Extensions of the type's common-group action to a factor class;
      // nullptr when the enumeration ran out of budget.
      std::vector<Extension> const* extensions(std::size_t cls, std::size_t d, std::size_t ti) {
        auto key = std::tuple{cls, d, ti};
        if (auto it = _ext.find(key); it != _ext.end()) {
          return &it->second;
        }
        auto const&     fc  = _classes[cls];
        auto const&     a   = *fc.base;
        auto const&     rho = rho_of(d, ti);
        PartialAction   s{std::vector<int>(a.order() * d, undefined),
                        std::vector<int>(a.order() * d, undefined)};
        std::vector<Fact> queue;
        for (std::size_t c = 0; c < rho.size(); ++c) {
          for (std::size_t x = 0; x < d; ++x) {
            queue.push_back({fc.embedding[c], static_cast<int>(x), static_cast<int>(rho[c][x])});
          }
        }
        std::vector<Extension> out;
        if (propagate(a, d, s, queue)) {
          extend(fc, d, s, out);
        }
        if (exhausted()) {
          return nullptr;
        }
        return &_ext.emplace(key, std::move(out)).first->second;
      }

      void extend(FactorClass const& fc, std::size_t d, PartialAction const& s,
                  std::vector<Extension>& out) {
        if (out.size() >= _options.max_extensions) {
          return;
        }
        auto const& a = *fc.base;
        for (Element g : fc.generators) {
          for (std::size_t x = 0; x < d; ++x) {
            if (s.act[g * d + x] != undefined) {
              continue;
            }
            for (std::size_t y = 0; y < d; ++y) {
              if (s.pre[g * d + y] != undefined) {
                continue;
              }
              if (!spend()) {
                return;
              }
              PartialAction     next = s;
              std::vector<Fact> queue{{g, static_cast<int>(x), static_cast<int>(y)}};
              if (propagate(a, d, next, queue)) {
                extend(fc, d, next, out);
              }
              if (exhausted() || out.size() >= _options.max_extensions) {
                return;
              }
            }
            return;
          }
        }
        Extension e;
        e.reserve(a.order());
        for (Element g = 0; g < a.order(); ++g) {
          std::vector<Point> img(d);
          for (std::size_t x = 0; x < d; ++x) {
            img[x] = static_cast<Point>(s.act[g * d + x]);
          }
          e.emplace_back(std::move(img));
        }
        out.push_back(std::move(e));
      }

      std::optional<AmalgamAction> try_type(NormalForm const&               target,
                                            std::vector<std::size_t> const& used,
                                            std::size_t                     d,
                                            std::size_t                     ti) {
        std::vector<std::vector<Extension> const*> lists(_spec.size());
        for (std::size_t i = 0; i < _spec.size(); ++i) {
          lists[i] = extensions(_class_of[i], d, ti);
          if (lists[i] == nullptr || lists[i]->empty()) {
            return std::nullopt;
          }
        }
        auto const&              rho = rho_of(d, ti);
        auto const&              head = rho[target.head];
        std::vector<std::size_t> pick(used.size(), 0);
        std::vector<std::size_t> slot(_spec.size(), 0);
        for (std::size_t u = 0; u < used.size(); ++u) {
          slot[used[u]] = u;
        }
        while (true) {
          if (!spend()) {
            return std::nullopt;
          }
          if (moves(target, lists, pick, slot, head, d)) {
            AmalgamAction act;
            act.degree = d;
            act.base_images.resize(_spec.size());
            act.shift_images.assign(_spec.size(), std::nullopt);
            for (std::size_t i = 0; i < _spec.size(); ++i) {
              auto pos = std::find(used.begin(), used.end(), i);
              act.base_images[i] =
                  (*lists[i])[pos == used.end() ? 0 : pick[static_cast<std::size_t>(pos - used.begin())]];
            }
            if (auto bad = act.check(_spec)) {
              throw Error(ErrorCode::invalid_argument, "separation produced a non-action: " + *bad);
            }
            return act;
          }
          // Odometer, last used factor fastest.
          std::size_t u = used.size();
          while (u > 0) {
            --u;
            if (++pick[u] < lists[used[u]]->size()) {
              break;
            }
            pick[u] = 0;
            if (u == 0) {
              return std::nullopt;
            }
          }
          if (used.empty()) {
            return std::nullopt;
          }
        }
      }

      // Whether head * s_1 * ... * s_n moves some point.
      bool moves(NormalForm const&                                  target,
                 std::vector<std::vector<Extension> const*> const& lists,
                 std::vector<std::size_t> const&                    pick,
                 std::vector<std::size_t> const&                    slot,
                 std::vector<Point> const&                          head,
                 std::size_t                                        d) const {
        for (std::size_t x0 = 0; x0 < d; ++x0) {
          auto x = static_cast<Point>(x0);
          for (auto it = target.letters.rbegin(); it != target.letters.rend(); ++it) {
            x = (*lists[it->factor])[pick[slot[it->factor]]][it->value.base](x);
          }
          if (head[x] != x0) {
            return true;
          }
        }
        return false;
      }

      AmalgamSpec const&                                          _spec;
      SearchOptions const&                                        _options;
      SearchStats&                                                _stats;
      std::vector<OrbitKind>                                      _kinds;
      std::vector<FactorClass>                                    _classes;
      std::vector<std::size_t>                                    _class_of;
      std::size_t                                                 _max_order = 1;
      std::map<std::size_t, std::vector<std::vector<std::size_t>>> _types;
      std::map<std::pair<std::size_t, std::size_t>, std::vector<std::vector<Point>>> _rho;
      std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<Extension>> _ext;
    };

    bool action_moves(AmalgamSpec const& spec, AmalgamAction const& action, NormalForm const& nf) {
      return !action.image(spec, nf).is_identity();
    }

  }  // namespace

  std::vector<std::size_t> unseparated_targets(AmalgamSpec const&             spec,
                                               AmalgamAction const&           action,
                                               std::vector<NormalForm> const& targets) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (!targets[i].is_identity() && !action_moves(spec, action, targets[i])) {
        out.push_back(i);
      }
    }
    return out;
  }

  SeparationResult separate(AmalgamSpec const&             spec,
                            std::vector<NormalForm> const& targets,
                            QuotientBundle                 bundle,
                            SearchOptions const&           options) {
    SeparationResult r;
    r.bundle = std::move(bundle);
    for (auto const& t : targets) {
      if (!is_normal_form(spec, t)) {
        throw Error(ErrorCode::spec_mismatch, "separation target is not a normal form of the spec");
      }
    }

    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < targets.size(); ++i) {
      if (targets[i].is_identity()) {
        continue;
      }
      bool moved = false;
      for (auto const& c : r.bundle.components) {
        if (action_moves(spec, c, targets[i])) {
          moved = true;
          break;
        }
      }
      if (!moved) {
        pending.push_back(i);
      }
    }
    if (pending.empty()) {
      return r;
    }

    std::size_t const initial = r.bundle.components.size();
    Search            search(spec, options, r.stats);
    while (!pending.empty()) {
      auto t = pending.front();
      auto hit = search.exhausted() ? std::nullopt : search.find(targets[t]);
      if (!hit) {
        r.unseparated.push_back(t);
        pending.erase(pending.begin());
        continue;
      }
      std::erase_if(pending, [&](std::size_t i) { return action_moves(spec, *hit, targets[i]); });
      r.bundle.components.push_back(std::move(*hit));
      ++r.stats.components_added;
    }

    // Drop components not needed to move any target, largest degree first.
    auto& comps = r.bundle.components;
    if (comps.size() > 1 && comps.size() > initial) {
      std::vector<std::vector<bool>> moved(comps.size(), std::vector<bool>(targets.size()));
      for (std::size_t c = 0; c < comps.size(); ++c) {
        for (std::size_t i = 0; i < targets.size(); ++i) {
          moved[c][i] = !targets[i].is_identity() && action_moves(spec, comps[c], targets[i]);
        }
      }
      std::vector<std::size_t> order(comps.size());
      for (std::size_t c = 0; c < order.size(); ++c) {
        order[c] = c;
      }
      std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return comps[a].degree > comps[b].degree;
      });
      std::vector<bool> keep(comps.size(), true);
      for (auto c : order) {
        keep[c] = false;
        bool needed = false;
        for (std::size_t i = 0; i < targets.size() && !needed; ++i) {
          if (!moved[c][i]) {
            continue;
          }
          bool other = false;
          for (std::size_t o = 0; o < comps.size() && !other; ++o) {
            other = keep[o] && moved[o][i];
          }
          needed = !other;
        }
        keep[c] = needed;
      }
      std::vector<AmalgamAction> kept;
      for (std::size_t c = 0; c < comps.size(); ++c) {
        if (keep[c]) {
          kept.push_back(std::move(comps[c]));
        } else {
          ++r.stats.components_pruned;
        }
      }
      comps = std::move(kept);
    }
    std::sort(r.stats.degrees_tried.begin(), r.stats.degrees_tried.end());
    return r;
  }

}  // namespace sofic
