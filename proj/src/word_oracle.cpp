#include "sofic/word_oracle.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

namespace sofic {

  char const* to_string(Verdict v) noexcept {
    switch (v) {
      case Verdict::equal: return "equal";
      case Verdict::unequal: return "unequal";
      case Verdict::unknown: return "unknown";
    }
    return "unknown";
  }

  std::vector<Word> rewrites(AmalgamSpec const& spec, Word const& w) {
    std::vector<Word> out;
    auto const&       common = *spec.common();
    for (std::size_t i = 0; i < w.size(); ++i) {
      auto const& f = spec.factor(w[i].factor);
      if (f.is_identity(w[i].value)) {
        Word v = w;
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        out.push_back(std::move(v));
        continue;
      }
      if (auto c = f.common_part(w[i].value)) {
        for (std::size_t g = 0; g < spec.size(); ++g) {
          if (g != w[i].factor) {
            Word v = w;
            v[i]   = {g, spec.factor(g).embed(*c)};
            out.push_back(std::move(v));
          }
        }
      }
    }
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      auto const& f = spec.factor(w[i].factor);
      auto const& g = spec.factor(w[i + 1].factor);
      if (w[i].factor == w[i + 1].factor) {
        Word v = w;
        v[i].value = f.multiply(w[i].value, w[i + 1].value);
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i + 1));
        out.push_back(std::move(v));
      }
      for (Element c = 1; c < common.order(); ++c) {
        Word v = w;
        v[i].value     = f.multiply(w[i].value, f.embed(c));
        v[i + 1].value = g.multiply(g.embed(common.inv(c)), w[i + 1].value);
        out.push_back(std::move(v));
      }
    }
    return out;
  }

  namespace {
    struct Exploration {
      bool        found_empty = false;
      bool        complete    = false;
      Word        least;
      std::size_t states = 0;
    };

    bool shorter_or_less(Word const& a, Word const& b) {
      return a.size() != b.size() ? a.size() < b.size() : a < b;
    }

    // Breadth-first over the rewrite graph; stops at the empty word when
    // `stop_at_empty` is set.
    Exploration explore(AmalgamSpec const& spec,
                        Word const&        start,
                        std::size_t        budget,
                        bool               stop_at_empty) {
      Exploration                       ex;
      std::unordered_set<Word, WordHash> seen{start};
      std::deque<Word>                  queue{start};
      ex.least  = start;
      ex.states = 1;
      while (!queue.empty()) {
        Word w = std::move(queue.front());
        queue.pop_front();
        if (w.empty()) {
          ex.found_empty = true;
          ex.least       = w;
          if (stop_at_empty) {
            return ex;
          }
        }
        if (shorter_or_less(w, ex.least)) {
          ex.least = w;
        }
        for (auto& v : rewrites(spec, w)) {
          if (seen.contains(v)) {
            continue;
          }
          if (ex.states >= budget) {
            return ex;
          }
          seen.insert(v);
          ++ex.states;
          queue.push_back(std::move(v));
        }
      }
      ex.complete = true;
      return ex;
    }

    std::optional<std::size_t> separating(AmalgamSpec const&                spec,
                                          std::vector<AmalgamAction> const& seps,
                                          Word const&                       a,
                                          Word const&                       b) {
      for (std::size_t i = 0; i < seps.size(); ++i) {
        if (seps[i].image(spec, a) != seps[i].image(spec, b)) {
          return i;
        }
      }
      return std::nullopt;
    }
  }  // namespace

  OracleResult oracle_equal(AmalgamSpec const&                spec,
                            Word const&                       w1,
                            Word const&                       w2,
                            std::vector<AmalgamAction> const& separators,
                            std::size_t                       budget) {
    check_word(spec, w1);
    check_word(spec, w2);
    OracleResult r;
    if (auto s = separating(spec, separators, w1, w2)) {
      r.verdict   = Verdict::unequal;
      r.separator = s;
      return r;
    }
    Word u = w1;
    auto inv = inverse_word(spec, w2);
    u.insert(u.end(), inv.begin(), inv.end());
    auto ex  = explore(spec, u, budget, true);
    r.states = ex.states;
    if (ex.found_empty) {
      r.verdict           = Verdict::equal;
      r.common_descendant = Word{};
    }
    return r;
  }

  WordOracle::WordOracle(AmalgamSpec const&         spec,
                         std::vector<AmalgamAction> separators,
                         std::size_t                budget)
      : _spec(spec), _separators(std::move(separators)), _budget(budget) {
    std::size_t off = 0;
    for (auto const& s : _separators) {
      _offsets.push_back(off);
      off += s.degree;
    }
  }

  WordOracle::Prepared WordOracle::prepare(Word const& w) const {
    check_word(_spec, w);
    Prepared p;
    p.word        = w;
    auto ex       = explore(_spec, w, _budget, false);
    p.complete    = ex.complete;
    p.canonical   = std::move(ex.least);
    p.states      = ex.states;
    for (auto const& s : _separators) {
      auto const  perm = s.image(_spec, w);
      auto const& img  = perm.images();
      p.signature.insert(p.signature.end(), img.begin(), img.end());
    }
    return p;
  }

  OracleResult WordOracle::compare(Prepared const& a, Prepared const& b) const {
    OracleResult r;
    r.states = a.states + b.states;
    auto mis = std::mismatch(a.signature.begin(), a.signature.end(), b.signature.begin());
    if (mis.first != a.signature.end()) {
      auto pos = static_cast<std::size_t>(mis.first - a.signature.begin());
      auto it  = std::upper_bound(_offsets.begin(), _offsets.end(), pos);
      r.verdict   = Verdict::unequal;
      r.separator = static_cast<std::size_t>(it - _offsets.begin()) - 1;
      return r;
    }
    if (a.complete && b.complete && a.canonical == b.canonical) {
      r.verdict           = Verdict::equal;
      r.common_descendant = a.canonical;
    }
    return r;
  }

  OracleResult WordOracle::operator()(Word const& a, Word const& b) const {
    return compare(prepare(a), prepare(b));
  }

}  // namespace sofic
