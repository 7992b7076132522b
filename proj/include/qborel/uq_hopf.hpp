#pragma once

/// Coalgebra and *-structure on top of the symbolic presentations: coproduct,
/// counit, antipode, unitary antipode, star, the comodule structure of the
/// twisted Borel double, the adjoint module structure, and the skew pairing
/// between the two Borel halves (with its degenerate variant).

#include <qborel/uq.hpp>

#include <stdexcept>
#include <tuple>
#include <vector>

namespace qb {

/// Finite sum of two-leg tensors with legs in (possibly different)
/// presentations over the same context.
class TensorEl {
 public:
  TensorEl(CtxPtr ctx, Pres pa, Pres pb) : ctx_(ctx), pa_(pa), pb_(pb) {}

  static TensorEl tensor(const El& a, const El& b, RatQ c = RatQ(1)) {
    TensorEl t(a.ctx(), a.pres(), b.pres());
    for (const auto& [ma, ca] : a.terms())
      for (const auto& [mb, cb] : b.terms()) t.add(ma, mb, c * ca * cb);
    return t;
  }
  static TensorEl unit(CtxPtr ctx, Pres pa, Pres pb) {
    return tensor(El::unit(ctx, pa), El::unit(ctx, pb));
  }

  CtxPtr ctx() const { return ctx_; }
  Pres pa() const { return pa_; }
  Pres pb() const { return pb_; }
  const std::map<std::pair<Mono, Mono>, RatQ>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool operator==(const TensorEl& o) const {
    return pa_ == o.pa_ && pb_ == o.pb_ && terms_ == o.terms_;
  }

  TensorEl& operator+=(const TensorEl& o) {
    for (const auto& [mm, c] : o.terms_) add(mm.first, mm.second, c);
    return *this;
  }
  friend TensorEl operator+(TensorEl a, const TensorEl& b) { return a += b; }
  friend TensorEl operator-(TensorEl a, const TensorEl& b) {
    for (const auto& [mm, c] : b.terms_) a.add(mm.first, mm.second, -c);
    return a;
  }
  friend TensorEl operator*(const RatQ& c, const TensorEl& a) {
    TensorEl r(a.ctx_, a.pa_, a.pb_);
    for (const auto& [mm, v] : a.terms_) r.add(mm.first, mm.second, c * v);
    return r;
  }
  friend TensorEl operator*(const TensorEl& x, const TensorEl& y) {
    TensorEl r(x.ctx_, x.pa_, x.pb_);
    for (const auto& [mx, cx] : x.terms_)
      for (const auto& [my, cy] : y.terms_) {
        El a = El::from_atoms(x.ctx_, x.pa_, El::to_atoms(mx.first));
        El b = El::from_atoms(x.ctx_, x.pb_, El::to_atoms(mx.second));
        El a2 = El::from_atoms(x.ctx_, x.pa_, El::to_atoms(my.first));
        El b2 = El::from_atoms(x.ctx_, x.pb_, El::to_atoms(my.second));
        r += tensor(a * a2, b * b2, cx * cy);
      }
    return r;
  }

  void add(const Mono& a, const Mono& b, RatQ c) {
    if (c.is_zero()) return;
    auto key = std::make_pair(a, b);
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(std::move(key), std::move(c));
    } else {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  /// Legs of each term as elements (coefficient attached separately).
  std::vector<std::tuple<El, El, RatQ>> factors() const {
    std::vector<std::tuple<El, El, RatQ>> out;
    for (const auto& [mm, c] : terms_)
      out.emplace_back(El::from_atoms(ctx_, pa_, El::to_atoms(mm.first)),
                       El::from_atoms(ctx_, pb_, El::to_atoms(mm.second)), c);
    return out;
  }

 private:
  CtxPtr ctx_;
  Pres pa_, pb_;
  std::map<std::pair<Mono, Mono>, RatQ> terms_;
};

namespace hopf_detail {

inline bool is_hopf(Pres p) {
  return p == Pres::Uqk || p == Pres::Uqb || p == Pres::UqbMinus ||
         p == Pres::UqPlus;
}

/// Coproduct of a single generator in a Hopf presentation.
inline TensorEl coproduct_atom(CtxPtr ctx, Pres p, const Atom& a) {
  TensorEl t(ctx, p, p);
  const Weight& ar = a.kind == Atom::CartA || a.kind == Atom::CartB
                         ? a.w
                         : ctx->rd().alpha(a.idx);
  switch (a.kind) {
    case Atom::CartA:
      return TensorEl::tensor(El::Ka(ctx, p, a.w), El::Ka(ctx, p, a.w));
    case Atom::CartB:
      return TensorEl::tensor(El::Kb(ctx, p, a.w), El::Kb(ctx, p, a.w));
    case Atom::E:
      t += TensorEl::tensor(El::E(ctx, p, a.idx), El::Ka(ctx, p, ar));
      t += TensorEl::tensor(El::unit(ctx, p), El::E(ctx, p, a.idx));
      return t;
    case Atom::F: {
      t += TensorEl::tensor(El::F(ctx, p, a.idx), El::unit(ctx, p));
      El kinv = p == Pres::UqPlus ? El::Kb(ctx, p, wneg(ar))
                                  : El::Ka(ctx, p, wneg(ar));
      t += TensorEl::tensor(kinv, El::F(ctx, p, a.idx));
      return t;
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace hopf_detail

inline TensorEl coproduct(const El& x) {
  Pres p = x.pres();
  if (!hopf_detail::is_hopf(p))
    throw std::invalid_argument("coproduct: presentation is not a Hopf algebra");
  TensorEl out(x.ctx(), p, p);
  for (const auto& [m, c] : x.terms()) {
    TensorEl t = TensorEl::unit(x.ctx(), p, p);
    for (const Atom& a : El::to_atoms(m))
      t = t * hopf_detail::coproduct_atom(x.ctx(), p, a);
    out += c * t;
  }
  return out;
}

inline RatQ counit(const El& x) {
  RatQ acc;
  for (const auto& [m, c] : x.terms())
    if (m.eword.empty() && m.fword.empty()) acc += c;
  return acc;
}

inline El antipode(const El& x) {
  Pres p = x.pres();
  CtxPtr ctx = x.ctx();
  if (!hopf_detail::is_hopf(p))
    throw std::invalid_argument("antipode: presentation is not a Hopf algebra");
  El out(ctx, p);
  for (const auto& [m, c] : x.terms()) {
    El prod = El::unit(ctx, p, c);
    auto atoms = El::to_atoms(m);
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
      const Atom& a = *it;
      El s(ctx, p);
      switch (a.kind) {
        case Atom::CartA:
          s = El::Ka(ctx, p, wneg(a.w));
          break;
        case Atom::CartB:
          s = El::Kb(ctx, p, wneg(a.w));
          break;
        case Atom::E:
          // S(E_r) = -E_r K_{alpha_r}^{-1}.
          s = El::from_atoms(
              ctx, p,
              {{Atom::E, a.idx, {}},
               {Atom::CartA, 0, wneg(ctx->rd().alpha(a.idx))}},
              RatQ(-1));
          break;
        case Atom::F: {
          // S(F_r) = -(Cartan)_{alpha_r} F_r on the opposite lattice.
          Atom::Kind lat =
              p == Pres::UqPlus ? Atom::CartB : Atom::CartA;
          s = El::from_atoms(ctx, p,
                             {{lat, 0, ctx->rd().alpha(a.idx)},
                              {Atom::F, a.idx, {}}},
                             RatQ(-1));
          break;
        }
      }
      prod = prod * s;
    }
    out += prod;
  }
  return out;
}

/// Unitary antipode R: involutive *-anti-automorphism.
inline El unitary_antipode(const El& x) {
  Pres p = x.pres();
  CtxPtr ctx = x.ctx();
  if (!hopf_detail::is_hopf(p))
    throw std::invalid_argument("unitary antipode: not a Hopf presentation");
  El out(ctx, p);
  for (const auto& [m, c] : x.terms()) {
    El prod = El::unit(ctx, p, c);
    auto atoms = El::to_atoms(m);
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
      const Atom& a = *it;
      El s(ctx, p);
      switch (a.kind) {
        case Atom::CartA:
          s = El::Ka(ctx, p, wneg(a.w));
          break;
        case Atom::CartB:
          s = El::Kb(ctx, p, wneg(a.w));
          break;
        case Atom::E:
          // R(E_r) = -q_r^{-1} E_r K_{alpha_r}^{-1}.
          s = El::from_atoms(
              ctx, p,
              {{Atom::E, a.idx, {}},
               {Atom::CartA, 0, wneg(ctx->rd().alpha(a.idx))}},
              -ctx->qpow(-ctx->rd().d(a.idx)));
          break;
        case Atom::F: {
          // R(F_r) = -q_r (Cartan)_{alpha_r} F_r.
          Atom::Kind lat = p == Pres::UqPlus ? Atom::CartB : Atom::CartA;
          s = El::from_atoms(ctx, p,
                             {{lat, 0, ctx->rd().alpha(a.idx)},
                              {Atom::F, a.idx, {}}},
                             -ctx->qpow(ctx->rd().d(a.idx)));
          break;
        }
      }
      prod = prod * s;
    }
    out += prod;
  }
  return out;
}

/// Star structure (antilinear anti-automorphism); closes within Uqk, UqPlus,
/// Uq0, UqTilde0 and Uq0n.
inline El star(const El& x) {
  Pres p = x.pres();
  CtxPtr ctx = x.ctx();
  const RootDatum& rd = ctx->rd();
  El out(ctx, p);
  for (const auto& [m, c] : x.terms()) {
    El prod = El::unit(ctx, p, c);  // rational coefficients: conj = id
    auto atoms = El::to_atoms(m);
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
      const Atom& a = *it;
      El s(ctx, p);
      Weight ar = a.kind == Atom::E || a.kind == Atom::F ? rd.alpha(a.idx)
                                                         : a.w;
      switch (p) {
        case Pres::Uqk:
          if (a.kind == Atom::CartA)
            s = El::Ka(ctx, p, a.w);
          else if (a.kind == Atom::E)  // E^* = F K_{alpha}
            s = El::from_atoms(ctx, p,
                               {{Atom::F, a.idx, {}}, {Atom::CartA, 0, ar}});
          else  // F^* = K^{-1} E
            s = El::from_atoms(
                ctx, p, {{Atom::CartA, 0, wneg(ar)}, {Atom::E, a.idx, {}}});
          break;
        case Pres::UqPlus:
        case Pres::Uq0:
          if (a.kind == Atom::CartA)
            s = El::Kb(ctx, p, a.w);  // K^* = L
          else if (a.kind == Atom::CartB)
            s = El::Ka(ctx, p, a.w);  // L^* = K
          else if (a.kind == Atom::E)  // E^* = F L_{alpha}
            s = El::from_atoms(ctx, p,
                               {{Atom::F, a.idx, {}}, {Atom::CartB, 0, ar}});
          else  // F^* = K^{-1} E
            s = El::from_atoms(
                ctx, p, {{Atom::CartA, 0, wneg(ar)}, {Atom::E, a.idx, {}}});
          break;
        case Pres::UqTilde0:
          if (a.kind == Atom::CartA)
            s = El::Ka(ctx, p, wneg(a.w));  // U unitary
          else if (a.kind == Atom::CartB)
            s = El::Kb(ctx, p, a.w);  // Z self-adjoint
          else if (a.kind == Atom::E)
            // E^* = F L_{alpha}, L_{alpha} = q^{-d} U_alpha Z_alpha.
            s = El::from_atoms(ctx, p,
                               {{Atom::F, a.idx, {}},
                                {Atom::CartA, 0, ar},
                                {Atom::CartB, 0, ar}},
                               ctx->qpow(-rd.d(a.idx)));
          else
            // F^* = K^{-1} E, K^{-1}_{alpha} = q^{d} U_alpha Z_{-alpha}.
            s = El::from_atoms(ctx, p,
                               {{Atom::CartA, 0, ar},
                                {Atom::CartB, 0, wneg(ar)},
                                {Atom::E, a.idx, {}}},
                               ctx->qpow(rd.d(a.idx)));
          break;
        case Pres::Uq0n:
          s = a.kind == Atom::E ? El::F(ctx, p, a.idx) : El::E(ctx, p, a.idx);
          break;
        default:
          throw std::invalid_argument("star: presentation has no closed star");
      }
      prod = prod * s;
    }
    out += prod;
  }
  return out;
}

/// Rename a Borel half into a larger presentation (algebra embedding).
inline El embed(const El& x, Pres target) {
  CtxPtr ctx = x.ctx();
  Pres src = x.pres();
  El out(ctx, target);
  bool src_minus = src == Pres::UqbMinus;
  if (!(src == Pres::Uqb || src == Pres::UqbMinus))
    throw std::invalid_argument("embed: source must be a Borel half");
  for (const auto& [m, c] : x.terms()) {
    std::vector<Atom> atoms;
    for (Atom a : El::to_atoms(m)) {
      if (a.kind == Atom::CartA && src_minus &&
          (target == Pres::UqPlus || target == Pres::Uq0))
        a.kind = Atom::CartB;  // the minus-Borel Cartan is the L lattice
      atoms.push_back(a);
    }
    out += El::from_atoms(ctx, target, std::move(atoms), c);
  }
  return out;
}

/// Star of a plus-Borel element, expressed in the opposite Borel
/// (E_r^* = F_r L_{alpha_r}, K_w^* = L_w).
inline El borel_star(const El& x) {
  if (x.pres() != Pres::Uqb)
    throw std::invalid_argument("borel_star: expects the plus Borel");
  CtxPtr ctx = x.ctx();
  El out(ctx, Pres::UqbMinus);
  for (const auto& [m, c] : x.terms()) {
    El prod = El::unit(ctx, Pres::UqbMinus, c);
    auto atoms = El::to_atoms(m);
    for (auto it = atoms.rbegin(); it != atoms.rend(); ++it) {
      El s = it->kind == Atom::CartA
                 ? El::Ka(ctx, Pres::UqbMinus, it->w)
                 : El::from_atoms(ctx, Pres::UqbMinus,
                                  {{Atom::F, it->idx, {}},
                                   {Atom::CartA, 0, ctx->rd().alpha(it->idx)}});
      prod = prod * s;
    }
    out += prod;
  }
  return out;
}

/// Comodule map of the twisted Borel double over the plain double:
/// restricts to the coproduct on either Borel copy.
inline TensorEl coaction(const El& x) {
  if (x.pres() != Pres::Uq0)
    throw std::invalid_argument("coaction: expects the twisted presentation");
  CtxPtr ctx = x.ctx();
  TensorEl out(ctx, Pres::Uq0, Pres::UqPlus);
  for (const auto& [m, c] : x.terms()) {
    TensorEl t = TensorEl::unit(ctx, Pres::Uq0, Pres::UqPlus);
    for (const Atom& a : El::to_atoms(m)) {
      TensorEl ta(ctx, Pres::Uq0, Pres::UqPlus);
      switch (a.kind) {
        case Atom::CartA:
          ta = TensorEl::tensor(El::Ka(ctx, Pres::Uq0, a.w),
                                El::Ka(ctx, Pres::UqPlus, a.w));
          break;
        case Atom::CartB:
          ta = TensorEl::tensor(El::Kb(ctx, Pres::Uq0, a.w),
                                El::Kb(ctx, Pres::UqPlus, a.w));
          break;
        case Atom::E: {
          Weight ar = ctx->rd().alpha(a.idx);
          ta = TensorEl::tensor(El::E(ctx, Pres::Uq0, a.idx),
                                El::Ka(ctx, Pres::UqPlus, ar));
          ta += TensorEl::tensor(El::unit(ctx, Pres::Uq0),
                                 El::E(ctx, Pres::UqPlus, a.idx));
          break;
        }
        case Atom::F: {
          Weight ar = ctx->rd().alpha(a.idx);
          ta = TensorEl::tensor(El::F(ctx, Pres::Uq0, a.idx),
                                El::unit(ctx, Pres::UqPlus));
          ta += TensorEl::tensor(El::Kb(ctx, Pres::Uq0, wneg(ar)),
                                 El::F(ctx, Pres::UqPlus, a.idx));
          break;
        }
      }
      t = t * ta;
    }
    out += c * t;
  }
  return out;
}

/// Adjoint module structure of the twisted double over the plain double:
/// x acted on by one generator at a time via S(h_1) x h_2, extended as a
/// right module action along words.
inline El adjoint_action(const El& x, const El& y) {
  if (x.pres() != Pres::Uq0 || y.pres() != Pres::UqPlus)
    throw std::invalid_argument("adjoint_action: wrong presentations");
  CtxPtr ctx = x.ctx();
  const RootDatum& rd = ctx->rd();
  auto act_atom = [&](const El& v, const Atom& a) -> El {
    Pres p = Pres::Uq0;
    switch (a.kind) {
      case Atom::CartA:
        return El::Ka(ctx, p, wneg(a.w)) * v * El::Ka(ctx, p, a.w);
      case Atom::CartB:
        return El::Kb(ctx, p, wneg(a.w)) * v * El::Kb(ctx, p, a.w);
      case Atom::E: {
        Weight ar = rd.alpha(a.idx);
        El t = El::from_atoms(
                   ctx, p,
                   {{Atom::E, a.idx, {}}, {Atom::CartA, 0, wneg(ar)}},
                   RatQ(-1)) *
               v * El::Ka(ctx, p, ar);
        return t + v * El::E(ctx, p, a.idx);
      }
      case Atom::F: {
        Weight ar = rd.alpha(a.idx);
        El la = El::Kb(ctx, p, ar);
        return -(la * El::F(ctx, p, a.idx) * v) + la * v * El::F(ctx, p, a.idx);
      }
    }
    throw std::logic_error("unreachable");
  };
  El out(ctx, Pres::Uq0);
  for (const auto& [m, c] : y.terms()) {
    El cur = c * x;
    for (const Atom& a : El::to_atoms(m)) cur = act_atom(cur, a);
    out += cur;
  }
  return out;
}

namespace pair_detail {

struct YAtom {
  bool is_f;
  int idx;     // F index
  Weight w;    // L exponent
};

inline std::vector<YAtom> y_atoms(Pres p, const Mono& m) {
  std::vector<YAtom> out;
  if (!m.eword.empty())
    throw std::invalid_argument("pairing: right side must be minus-Borel");
  for (int r : m.fword) out.push_back({true, r, {}});
  if (p == Pres::UqbMinus) {
    if (!wis_zero(m.c1)) out.push_back({false, 0, m.c1});
    if (!wis_zero(m.c2)) throw std::invalid_argument("pairing: bad right side");
  } else {  // UqPlus-shaped carrier: L lives on the second lattice
    if (!wis_zero(m.c1)) throw std::invalid_argument("pairing: bad right side");
    if (!wis_zero(m.c2)) out.push_back({false, 0, m.c2});
  }
  return out;
}

inline RatQ eps(const std::vector<YAtom>& ys, size_t from) {
  for (size_t i = from; i < ys.size(); ++i)
    if (ys[i].is_f) return RatQ();
  return RatQ(1);
}

}  // namespace pair_detail

/// Skew pairing between the plus Borel (words in K_w, E_r; accepted from
/// Uqb/Uqk/UqPlus-shaped monomials with empty F part) and the minus Borel
/// (words in L_w, F_r).  The degenerate variant kills (E,F) and flips the
/// sign in the Cartan pairing exponent.
class SkewPairing {
 public:
  explicit SkewPairing(CtxPtr ctx, bool degenerate = false)
      : ctx_(ctx), degenerate_(degenerate) {}

  RatQ pair(const El& x, const El& y) const {
    RatQ acc;
    for (const auto& [mx, cx] : x.terms()) {
      if (!mx.fword.empty())
        throw std::invalid_argument("pairing: left side must be plus-Borel");
      std::vector<Atom> xs;
      if (x.pres() == Pres::UqbMinus)
        throw std::invalid_argument("pairing: left side must be plus-Borel");
      if (!wis_zero(mx.c2))
        throw std::invalid_argument("pairing: left side must be plus-Borel");
      if (!wis_zero(mx.c1)) xs.push_back({Atom::CartA, 0, mx.c1});
      for (int r : mx.eword) xs.push_back({Atom::E, r, {}});
      for (const auto& [my, cy] : y.terms()) {
        auto ys = pair_detail::y_atoms(y.pres(), my);
        acc += cx * cy * pair_words(xs, 0, ys);
      }
    }
    return acc;
  }

 private:
  using YAtoms = std::vector<pair_detail::YAtom>;

  /// Pair the sub-word xs[i..] against the y-word ys.
  RatQ pair_words(const std::vector<Atom>& xs, size_t i,
                  const YAtoms& ys) const {
    if (i == xs.size()) return pair_detail::eps(ys, 0);
    const Atom& g = xs[i];
    // (g x', y) = (g, y_(1)) (x', y_(2)); expand the coproduct of the y-word
    // by choosing, for each F letter, whether it goes to leg 1 or leg 2
    // (its companion Cartan factor L^{-1} goes to the other leg).
    size_t nf = 0;
    std::vector<size_t> fpos;
    for (size_t k = 0; k < ys.size(); ++k)
      if (ys[k].is_f) fpos.push_back(k);
    nf = fpos.size();
    RatQ acc;
    for (size_t choice = 0; choice < (size_t{1} << nf); ++choice) {
      // mask[k] = true  -> letter k contributes to leg 1.
      // For an F letter sent to leg 2, leg 1 receives L^{-alpha}.
      YAtoms leg1, leg2;
      size_t fi = 0;
      for (size_t k = 0; k < ys.size(); ++k) {
        if (!ys[k].is_f) {
          leg1.push_back(ys[k]);  // L_w -> L_w (x) L_w
          leg2.push_back(ys[k]);
          continue;
        }
        bool to_leg1 = (choice >> fi) & 1u;
        ++fi;
        if (to_leg1) {
          leg1.push_back(ys[k]);  // F (x) 1
        } else {
          leg1.push_back({false, 0, wneg(ctx_->rd().alpha(ys[k].idx))});
          leg2.push_back(ys[k]);  // L^{-1} (x) F
        }
      }
      RatQ p1 = pair_gen(g, leg1);
      if (p1.is_zero()) continue;
      acc += p1 * pair_words(xs, i + 1, leg2);
    }
    return acc;
  }

  RatQ pair_gen(const Atom& g, const YAtoms& ys) const {
    if (g.kind == Atom::CartA) {
      RatQ acc(1);
      for (const auto& a : ys) {
        if (a.is_f) return RatQ();
        acc *= ctx_->qpow((degenerate_ ? 1 : -1) *
                          ctx_->rd().pairing(g.w, a.w));
      }
      return acc;
    }
    // g = E_r against a y-word: peel the first letter.
    return pair_e(g.idx, ys, 0);
  }

  RatQ pair_e(int r, const YAtoms& ys, size_t from) const {
    if (from == ys.size()) return RatQ();
    const auto& a = ys[from];
    RatQ acc;
    // (K_{alpha_r}, a) * (E_r, rest)
    RatQ kfac;
    if (!a.is_f)
      kfac = ctx_->qpow((degenerate_ ? 1 : -1) *
                        ctx_->rd().pairing(ctx_->rd().alpha(r), a.w));
    if (!kfac.is_zero()) acc += kfac * pair_e(r, ys, from + 1);
    // (E_r, a) * eps(rest)
    if (!degenerate_ && a.is_f && a.idx == r) {
      // (E_r, F_r) = 1/(q_r^{-1} - q_r).
      acc += (-ctx_->ef_scale(r)) * pair_detail::eps(ys, from + 1);
    }
    return acc;
  }

  CtxPtr ctx_;
  bool degenerate_;
};

}  // namespace qb
