#pragma once

/// Symbolic quantized enveloping algebras over Q(q): the full algebra and its
/// Borel halves, the Drinfeld-double Borel closure, its twisted (Galois
/// object) version, the covering algebra with unitary/self-adjoint Cartan
/// generators, and the twisted nilpotent *-algebra.  Elements are kept in the
/// triangular normal form (F-word, Cartan exponents, E-word) with E/F words
/// reduced modulo the quantum Serre ideal by exact linear algebra.
///
/// Because Cartan exchange factors involve powers q^{(mu,nu)} with (mu,nu)
/// only rational, all Laurent exponents are stored in units of q^{1/qden}
/// where qden is a per-datum denominator-clearing constant.

#include <qborel/qfield.hpp>
#include <qborel/root_data.hpp>

#include <algorithm>
#include <cassert>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qb {

/// Presentation tags.
///  - Uqk:      K_w, E_r, F_r (compact real form of the full algebra).
///  - Uqb:      K_w, E_r.
///  - UqbMinus: L_w, F_r (opposite Borel; its Cartan is stored in c1).
///  - UqPlus:   K_w, L_w commuting, E_r, F_r (double of the Borel).
///  - Uq0:      K_w, L_w q-commuting, E_r, F_r (twisted copy).
///  - UqTilde0: U_w, Z_w, E_r, F_r (covering; K_w, L_w are composite).
///  - Uq0n:     X_r ("E"), X_r^* ("F"), no Cartan part.
enum class Pres { Uqk, Uqb, UqbMinus, UqPlus, Uq0, UqTilde0, Uq0n };

/// Normal-form monomial: F-word, Cartan exponents, E-word.  c1/c2 are
/// exponents on the first/second Cartan lattice of the presentation (K/L or
/// U/Z); unused lattices stay as zero vectors.
struct Mono {
  std::vector<int> fword;
  Weight c1, c2;
  std::vector<int> eword;
  auto operator<=>(const Mono&) const = default;
};

/// One generator occurrence during rewriting, in left-to-right word order.
struct Atom {
  enum Kind : char { F = 0, CartA = 1, CartB = 2, E = 3 } kind;
  int idx = 0;  // simple-root index for E/F
  Weight w;     // lattice exponent for CartA/CartB
};

/// Per-datum context: root data, scalar conventions, Serre reduction tables.
class UqContext {
 public:
  using Expansion = std::map<std::vector<int>, RatQ>;

  explicit UqContext(const std::string& label)
      : rd_(RootDatum::create(label)) {
    // qden clears denominators of (mu,nu) and (mu,nu)/2 for mu,nu in P.
    long lcm = 1;
    for (int r = 0; r < rd_.rank(); ++r)
      for (int s = 0; s < rd_.rank(); ++s) {
        Rational p = rd_.pairing(rd_.fundamental(r), rd_.fundamental(s));
        long den = static_cast<long>(boost::multiprecision::denominator(p));
        lcm = std::lcm(lcm, den);
      }
    qden_ = static_cast<int>(2 * lcm);
  }

  const RootDatum& rd() const { return rd_; }
  int rank() const { return rd_.rank(); }
  int qden() const { return qden_; }

  /// q^e as an exact scalar; e must lie on the q^{1/qden} grid.
  RatQ qpow(const Rational& e) const {
    Rational scaled = e * qden_;
    if (boost::multiprecision::denominator(scaled) != 1)
      throw std::invalid_argument("q-exponent not on the 1/qden grid");
    return RatQ::q_power(
        static_cast<int>(boost::multiprecision::numerator(scaled)));
  }
  RatQ qpow_pair(const Weight& a, const Weight& b) const {
    return qpow(rd_.pairing(a, b));
  }
  /// [n] at q_r = q^{d_r}.
  RatQ qint(int n, int r) const { return scale_exp(q_int(n, rd_.d(r))); }
  RatQ qfact(int n, int r) const { return scale_exp(q_factorial(n, rd_.d(r))); }
  /// 1 / (q_r - q_r^{-1}).
  RatQ ef_scale(int r) const {
    int d = rd_.d(r);
    return RatQ(1) / (qpow(d) - qpow(-d));
  }
  /// Evaluate a scalar at numeric q (via the q^{1/qden} grid variable).
  double to_double(const RatQ& x, double q) const {
    double v = std::pow(q, 1.0 / qden_);
    auto eval_laurent = [&](const Laurent& l) {
      double acc = 0;
      for (const auto& [k, c] : l.coeffs())
        acc += static_cast<double>(c) * std::pow(v, k);
      return acc;
    };
    return eval_laurent(x.num()) / eval_laurent(x.den());
  }

  /// Serre reduction: expansion of a word in simple-root letters over the
  /// canonical complement basis of the Serre ideal in its degree slice.
  const Expansion& reduce_word(const std::vector<int>& word) const {
    std::vector<int> content(rank(), 0);
    for (int r : word) content[r]++;
    const auto& table = serre_table(content);
    return table.at(word);
  }

  /// Basis words (complement of the Serre ideal) for a given content.
  std::vector<std::vector<int>> basis_words(
      const std::vector<int>& content) const {
    const auto& table = serre_table(content);
    std::vector<std::vector<int>> basis;
    for (const auto& [w, exp] : table)
      if (exp.size() == 1 && exp.begin()->first == w &&
          exp.begin()->second == RatQ(1))
        basis.push_back(w);
    return basis;
  }

 private:
  // Laurent with exponents in plain q-units -> scalar on the q^{1/qden} grid.
  RatQ scale_exp(const Laurent& l) const {
    Laurent out;
    for (const auto& [k, v] : l.coeffs())
      out += Laurent::monomial(v, k * qden_);
    return RatQ(out);
  }

  static void words_of_content(std::vector<int>& content, std::vector<int>& cur,
                               std::vector<std::vector<int>>& out) {
    bool any = false;
    for (size_t r = 0; r < content.size(); ++r) {
      if (content[r] == 0) continue;
      any = true;
      content[r]--;
      cur.push_back(static_cast<int>(r));
      words_of_content(content, cur, out);
      cur.pop_back();
      content[r]++;
    }
    if (!any) out.push_back(cur);
  }

  void enumerate_subcontents(const std::vector<int>& cap, int pos,
                             std::vector<int>& cur,
                             std::vector<std::vector<int>>& out) const {
    if (pos == rank()) {
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= cap[pos]; ++v) {
      cur.push_back(v);
      enumerate_subcontents(cap, pos + 1, cur, out);
      cur.pop_back();
    }
  }

  using Row = std::map<int, RatQ>;  // word index -> coefficient

  static void row_axpy(Row& target, const RatQ& f, const Row& src, int skip) {
    for (const auto& [c, v] : src) {
      if (c == skip) continue;
      auto jt = target.find(c);
      if (jt == target.end()) {
        RatQ nv = -(f * v);
        if (!nv.is_zero()) target[c] = std::move(nv);
      } else {
        jt->second -= f * v;
        if (jt->second.is_zero()) target.erase(jt);
      }
    }
  }

  const std::map<std::vector<int>, Expansion>& serre_table(
      const std::vector<int>& content) const {
    auto found = cache_.find(content);
    if (found != cache_.end()) return found->second;

    std::vector<std::vector<int>> words;
    {
      std::vector<int> c = content, cur;
      words_of_content(c, cur, words);
    }
    std::sort(words.begin(), words.end());
    std::map<std::vector<int>, int> index;
    for (size_t i = 0; i < words.size(); ++i)
      index[words[i]] = static_cast<int>(i);

    // Rows spanning the degree-content slice of the two-sided Serre ideal:
    // every m1 * serre_{rs} * m2 matching the content.
    std::vector<Row> rows;
    for (int r = 0; r < rank(); ++r)
      for (int s = 0; s < rank(); ++s) {
        if (r == s) continue;
        int nr = 1 - rd_.cartan(r, s);
        std::vector<int> rem = content;
        rem[r] -= nr;
        rem[s] -= 1;
        if (rem[r] < 0 || rem[s] < 0) continue;
        std::vector<std::vector<int>> contexts;
        std::vector<int> tmp;
        enumerate_subcontents(rem, 0, tmp, contexts);
        for (const auto& mu1 : contexts) {
          std::vector<int> mu2(rank());
          for (int t = 0; t < rank(); ++t) mu2[t] = rem[t] - mu1[t];
          std::vector<std::vector<int>> lefts, rights;
          {
            std::vector<int> c1v = mu1, c2v = mu2, cur;
            words_of_content(c1v, cur, lefts);
            words_of_content(c2v, cur, rights);
          }
          for (const auto& m1 : lefts)
            for (const auto& m2 : rights) {
              Row row;
              for (int p = 0; p <= nr; ++p) {
                RatQ coeff = qfact(nr, r) / (qfact(p, r) * qfact(nr - p, r));
                if (p % 2 == 1) coeff = -coeff;
                std::vector<int> w = m1;
                for (int t = 0; t < nr - p; ++t) w.push_back(r);
                w.push_back(s);
                for (int t = 0; t < p; ++t) w.push_back(r);
                w.insert(w.end(), m2.begin(), m2.end());
                int col = index.at(w);
                auto it = row.find(col);
                if (it == row.end())
                  row[col] = coeff;
                else {
                  it->second += coeff;
                  if (it->second.is_zero()) row.erase(it);
                }
              }
              if (!row.empty()) rows.push_back(std::move(row));
            }
        }
      }

    // Exact reduced row echelon form with pivots on leftmost columns.
    std::vector<Row> rref;
    std::map<int, int> pivots;  // pivot column -> row in rref
    for (Row& row : rows) {
      for (const auto& [col, rr] : pivots) {
        auto it = row.find(col);
        if (it == row.end()) continue;
        RatQ f = it->second;
        row.erase(it);
        row_axpy(row, f, rref[rr], col);
      }
      if (row.empty()) continue;
      int pcol = row.begin()->first;
      RatQ p = row.begin()->second;
      for (auto& [c, v] : row) v /= p;
      for (auto& [col, rr] : pivots) {
        auto it = rref[rr].find(pcol);
        if (it == rref[rr].end()) continue;
        RatQ f = it->second;
        rref[rr].erase(it);
        row_axpy(rref[rr], f, row, pcol);
      }
      rref.push_back(std::move(row));
      pivots[pcol] = static_cast<int>(rref.size()) - 1;
    }

    std::map<std::vector<int>, Expansion> table;
    for (size_t i = 0; i < words.size(); ++i) {
      auto pv = pivots.find(static_cast<int>(i));
      if (pv == pivots.end()) {
        table[words[i]] = {{words[i], RatQ(1)}};
      } else {
        Expansion exp;
        for (const auto& [c, v] : rref[pv->second])
          if (c != static_cast<int>(i)) exp[words[c]] = -v;
        table[words[i]] = std::move(exp);
      }
    }
    return cache_.emplace(content, std::move(table)).first->second;
  }

  RootDatum rd_;
  int qden_ = 2;
  mutable std::map<std::vector<int>, std::map<std::vector<int>, Expansion>>
      cache_;
};

using CtxPtr = const UqContext*;

/// Element of one of the presentations: finite Q(q)-combination of
/// normal-form monomials.
class El {
 public:
  El() = default;
  El(CtxPtr ctx, Pres p) : ctx_(ctx), pres_(p) {}

  static El zero(CtxPtr ctx, Pres p) { return El(ctx, p); }
  static El unit(CtxPtr ctx, Pres p, RatQ c = RatQ(1)) {
    El e(ctx, p);
    e.add_mono(unit_mono(ctx), std::move(c));
    return e;
  }
  static El generator(CtxPtr ctx, Pres p, Atom::Kind kind, int idx) {
    El e(ctx, p);
    Mono m = unit_mono(ctx);
    if (kind == Atom::E)
      m.eword.push_back(idx);
    else
      m.fword.push_back(idx);
    e.add_mono(std::move(m), RatQ(1));
    return e;
  }
  static El E(CtxPtr ctx, Pres p, int r) { return generator(ctx, p, Atom::E, r); }
  static El F(CtxPtr ctx, Pres p, int r) { return generator(ctx, p, Atom::F, r); }
  /// Cartan generator on the first lattice (K_w, or U_w for UqTilde0).
  static El Ka(CtxPtr ctx, Pres p, const Weight& w) {
    El e(ctx, p);
    Mono m = unit_mono(ctx);
    m.c1 = w;
    e.add_mono(std::move(m), RatQ(1));
    return e;
  }
  /// Cartan generator on the second lattice (L_w, or Z_w for UqTilde0).
  static El Kb(CtxPtr ctx, Pres p, const Weight& w) {
    El e(ctx, p);
    Mono m = unit_mono(ctx);
    m.c2 = w;
    e.add_mono(std::move(m), RatQ(1));
    return e;
  }

  CtxPtr ctx() const { return ctx_; }
  Pres pres() const { return pres_; }
  const std::map<Mono, RatQ>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const El& o) const {
    return pres_ == o.pres_ && terms_ == o.terms_;
  }

  El& operator+=(const El& o) {
    for (const auto& [m, c] : o.terms_) add_mono(m, c);
    return *this;
  }
  El& operator-=(const El& o) {
    for (const auto& [m, c] : o.terms_) add_mono(m, -c);
    return *this;
  }
  friend El operator+(El a, const El& b) { return a += b; }
  friend El operator-(El a, const El& b) { return a -= b; }
  El operator-() const {
    El r(ctx_, pres_);
    for (const auto& [m, c] : terms_) r.terms_[m] = -c;
    return r;
  }
  friend El operator*(const RatQ& c, const El& a) {
    El r(a.ctx_, a.pres_);
    if (c.is_zero()) return r;
    for (const auto& [m, v] : a.terms_) r.terms_[m] = c * v;
    return r;
  }
  friend El operator*(const El& a, const El& b) {
    assert(a.ctx_ == b.ctx_ && a.pres_ == b.pres_);
    El r(a.ctx_, a.pres_);
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) {
        std::vector<Atom> word = to_atoms(ma);
        std::vector<Atom> wb = to_atoms(mb);
        word.insert(word.end(), wb.begin(), wb.end());
        r.accumulate_normalized(std::move(word), ca * cb);
      }
    return r;
  }
  El& operator*=(const El& o) { return *this = *this * o; }

  /// Build an element from an explicit generator word (any order).
  static El from_atoms(CtxPtr ctx, Pres p, std::vector<Atom> atoms,
                       RatQ coeff = RatQ(1)) {
    El r(ctx, p);
    r.accumulate_normalized(std::move(atoms), std::move(coeff));
    return r;
  }

  /// Monomial as a normal-ordered atom word.
  static std::vector<Atom> to_atoms(const Mono& m) {
    std::vector<Atom> atoms;
    for (int r : m.fword) atoms.push_back({Atom::F, r, {}});
    if (!wis_zero(m.c1)) atoms.push_back({Atom::CartA, 0, m.c1});
    if (!wis_zero(m.c2)) atoms.push_back({Atom::CartB, 0, m.c2});
    for (int r : m.eword) atoms.push_back({Atom::E, r, {}});
    return atoms;
  }

 private:
  static Mono unit_mono(CtxPtr ctx) {
    Mono m;
    m.c1 = wzero(ctx->rank());
    m.c2 = wzero(ctx->rank());
    return m;
  }

  void add_mono(Mono m, RatQ c) {
    if (c.is_zero()) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
      terms_.emplace(std::move(m), std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  // ---- rewriting to normal form -----------------------------------------

  /// Exchange factor when swapping adjacent x y -> y x, for the non-E/F
  /// cases.  Returns the scalar f with x y = f * (y x).
  RatQ swap_factor(const Atom& x, const Atom& y) const {
    const RootDatum& rd = ctx_->rd();
    auto al = [&](int r) { return rd.alpha(r); };
    if (x.kind == Atom::E && y.kind == Atom::CartA) {
      if (pres_ == Pres::UqTilde0) return RatQ(1);  // U commutes with E
      return ctx_->qpow(-rd.pairing(y.w, al(x.idx)));
    }
    if (x.kind == Atom::E && y.kind == Atom::CartB)
      return ctx_->qpow(-rd.pairing(y.w, al(x.idx)));  // L or Z vs E
    if (x.kind == Atom::CartA && y.kind == Atom::F) {
      if (pres_ == Pres::Uq0)  // K_w F_r = q^{(w,alpha_r)} F_r K_w
        return ctx_->qpow(rd.pairing(x.w, al(y.idx)));
      return ctx_->qpow(-rd.pairing(x.w, al(y.idx)));  // K or U vs F
    }
    if (x.kind == Atom::CartB && y.kind == Atom::F) {
      if (pres_ == Pres::UqTilde0) return RatQ(1);  // Z commutes with F
      return ctx_->qpow(-rd.pairing(x.w, al(y.idx)));  // L vs F
    }
    if (x.kind == Atom::CartB && y.kind == Atom::CartA) {
      switch (pres_) {
        case Pres::UqPlus:
          return RatQ(1);
        case Pres::Uq0:  // L_x K_y = q^{2(y,x)} K_y L_x
          return ctx_->qpow(2 * rd.pairing(y.w, x.w));
        case Pres::UqTilde0:  // Z_x U_y = q^{-(y,x)} U_y Z_x
          return ctx_->qpow(-rd.pairing(y.w, x.w));
        default:
          throw std::logic_error("unexpected two-lattice presentation");
      }
    }
    throw std::logic_error("swap_factor: unexpected atom pair");
  }

  /// Process a free word into normal form, accumulating into terms_.
  void accumulate_normalized(std::vector<Atom> word, RatQ coeff) {
    std::vector<std::pair<std::vector<Atom>, RatQ>> stack;
    stack.emplace_back(std::move(word), std::move(coeff));
    const RootDatum& rd = ctx_->rd();
    while (!stack.empty()) {
      auto [w, c] = std::move(stack.back());
      stack.pop_back();
      bool rewritten = false;
      for (size_t i = 0; i + 1 < w.size(); ++i) {
        const Atom& x = w[i];
        const Atom& y = w[i + 1];
        if (x.kind <= y.kind) continue;
        if (x.kind == Atom::E && y.kind == Atom::F) {
          int r = x.idx, s = y.idx;
          // Swap term.
          {
            std::vector<Atom> sw = w;
            std::swap(sw[i], sw[i + 1]);
            RatQ f(1);
            if (pres_ == Pres::Uq0n)
              f = ctx_->qpow(-rd.pairing(rd.alpha(r), rd.alpha(s)));
            stack.emplace_back(std::move(sw), f * c);
          }
          // Delta terms.
          if (r == s) {
            RatQ cr = ctx_->ef_scale(r);
            auto push_delta = [&](std::vector<Atom> mid, RatQ f) {
              std::vector<Atom> nw(w.begin(), w.begin() + i);
              nw.insert(nw.end(), mid.begin(), mid.end());
              nw.insert(nw.end(), w.begin() + i + 2, w.end());
              stack.emplace_back(std::move(nw), f * c);
            };
            Weight ar = rd.alpha(r);
            switch (pres_) {
              case Pres::Uqk:
                push_delta({{Atom::CartA, 0, ar}}, cr);
                push_delta({{Atom::CartA, 0, wneg(ar)}}, -cr);
                break;
              case Pres::UqPlus:
                push_delta({{Atom::CartA, 0, ar}}, cr);
                push_delta({{Atom::CartB, 0, wneg(ar)}}, -cr);
                break;
              case Pres::Uq0:
                push_delta({{Atom::CartB, 0, wneg(ar)}}, -cr);
                break;
              case Pres::UqTilde0:
                // -L^{-1}/(q_r-q_r^{-1}) with
                // L^{-1}_{a_r} = q^{-d_r} U_{-a_r} Z_{-a_r}.
                push_delta({{Atom::CartA, 0, wneg(ar)},
                            {Atom::CartB, 0, wneg(ar)}},
                           -(ctx_->qpow(-rd.d(r)) * cr));
                break;
              case Pres::Uq0n:
                push_delta({}, -cr);
                break;
              default:
                throw std::logic_error("E-F pair in a one-sided presentation");
            }
          }
          rewritten = true;
          break;
        }
        // Plain exchange with scalar factor.
        RatQ f = swap_factor(x, y);
        std::vector<Atom> sw = w;
        std::swap(sw[i], sw[i + 1]);
        stack.emplace_back(std::move(sw), f * c);
        rewritten = true;
        break;
      }
      if (rewritten) continue;

      // Sorted word: collect into a monomial, then Serre-reduce words.
      Mono m = unit_mono(ctx_);
      for (const Atom& a : w) {
        switch (a.kind) {
          case Atom::F:
            m.fword.push_back(a.idx);
            break;
          case Atom::CartA:
            m.c1 = wadd(m.c1, a.w);
            break;
          case Atom::CartB:
            m.c2 = wadd(m.c2, a.w);
            break;
          case Atom::E:
            m.eword.push_back(a.idx);
            break;
        }
      }
      const auto& ered = ctx_->reduce_word(m.eword);
      const auto& fred = ctx_->reduce_word(m.fword);
      for (const auto& [ew, ec] : ered)
        for (const auto& [fw, fc] : fred) {
          Mono mm = m;
          mm.eword = ew;
          mm.fword = fw;
          add_mono(std::move(mm), c * ec * fc);
        }
    }
  }

  CtxPtr ctx_ = nullptr;
  Pres pres_ = Pres::Uqk;
  std::map<Mono, RatQ> terms_;
};

}  // namespace qb
