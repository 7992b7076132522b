#pragma once

/// The localized amplified algebra and the operators implementing the doubled
/// Borel generators inside it: normal-ordered elements (u |b| x) * f with f a
/// lattice-function atom, the implementing elements e_r, f_r, k_w, l_w, x_r,
/// the *-homomorphism realizing the twisted/doubled presentations in this
/// algebra, and the adjoint-form translation action.

#include <qborel/ampl.hpp>

#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qb {

namespace gal_detail {

/// f -> f_s with f_s(chi) = f(chi - s); returns the shifted atom and the
/// scalar picked up by a closed-form character atom.
inline std::pair<FAtom, double> fatom_shift(PolCtxPtr pc, const FAtom& a,
                                            const Weight& s) {
  if (a.kind == FAtom::Delta) return {FAtom{FAtom::Delta, wadd(a.w, s)}, 1.0};
  return {a, pc->qpow(-pc->rd().pairing(a.w, s))};
}

/// Pointwise product of two function atoms; nullopt when it vanishes.
inline std::optional<std::pair<FAtom, double>> fatom_mul(PolCtxPtr pc,
                                                         const FAtom& a,
                                                         const FAtom& b) {
  if (a.kind == FAtom::Delta && b.kind == FAtom::Delta) {
    if (a.w == b.w) return std::make_pair(a, 1.0);
    return std::nullopt;
  }
  if (a.kind == FAtom::Delta)
    return std::make_pair(a, pc->qpow(pc->rd().pairing(b.w, a.w)));
  if (b.kind == FAtom::Delta)
    return std::make_pair(b, pc->qpow(pc->rd().pairing(a.w, b.w)));
  return std::make_pair(FAtom{FAtom::Zchar, wadd(a.w, b.w)}, 1.0);
}

}  // namespace gal_detail

/// Element of the localized amplified algebra in normal order
/// (localized part) * (function atom), with the flavor-zero interchange
/// relation f y = y f_{lwt(y)} for y in the localized coefficient algebra.
class GalEl {
 public:
  GalEl() : pc_(nullptr) {}
  explicit GalEl(PolCtxPtr pc) : pc_(pc) {}

  static GalEl term(PolCtxPtr pc, const LocEl& x, const FAtom& a) {
    GalEl r(pc);
    if (x.norm() != 0.0) r.terms_[a] = x;
    return r;
  }
  static GalEl from_loc(const LocEl& x) {
    return term(x.pc(), x, FAtom{FAtom::Zchar, wzero(x.pc()->rd().rank())});
  }
  static GalEl from_pol(const PolEl& x) {
    return from_loc(LocEl::from_pol(x));
  }
  /// Embed a flavor-zero amplified element.
  static GalEl from_amp(const AmpEl& a) {
    if (a.flavor() != Flavor::Zero)
      throw std::invalid_argument("GalEl::from_amp: expects flavor zero");
    GalEl r(a.pc());
    for (const auto& [at, x] : a.terms()) r.terms_[at] = LocEl::from_pol(x);
    return r;
  }
  static GalEl one(PolCtxPtr pc) { return from_pol(PolEl::one(pc)); }
  static GalEl u_gal(PolCtxPtr pc, const Weight& w) {
    return from_loc(LocEl::u_el(pc, w));
  }
  static GalEl babs_gal(PolCtxPtr pc, const Weight& w) {
    return from_loc(LocEl::babs_el(pc, w));
  }
  static GalEl b_gal(PolCtxPtr pc, const Weight& w) {
    return from_loc(LocEl::b_formal(pc, w));
  }
  static GalEl z_gal(PolCtxPtr pc, const Weight& w) {
    return term(pc, LocEl::from_pol(PolEl::one(pc)), FAtom{FAtom::Zchar, w});
  }
  static GalEl delta_gal(PolCtxPtr pc, const Weight& chi) {
    return term(pc, LocEl::from_pol(PolEl::one(pc)), FAtom{FAtom::Delta, chi});
  }

  PolCtxPtr pc() const { return pc_; }
  const std::map<FAtom, LocEl>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  GalEl& operator+=(const GalEl& o) {
    if (!pc_) pc_ = o.pc_;
    for (const auto& [a, x] : o.terms_) {
      auto it = terms_.find(a);
      if (it == terms_.end())
        terms_[a] = x;
      else
        it->second += x;
    }
    prune();
    return *this;
  }
  GalEl operator+(const GalEl& o) const {
    GalEl r = *this;
    r += o;
    return r;
  }
  GalEl operator-(const GalEl& o) const { return *this + (-1.0) * o; }
  friend GalEl operator*(double s, const GalEl& x) {
    GalEl r = x;
    for (auto& [a, p] : r.terms_) p = s * p;
    r.prune();
    return r;
  }

  /// (x1 a1)(x2 a2) = sum over left-graded parts y of x2 of
  /// (x1 y) * ((a1)_{lwt y} a2).
  GalEl operator*(const GalEl& o) const {
    GalEl out(pc_);
    for (const auto& [a1, x1] : terms_)
      for (const auto& [a2, x2] : o.terms_)
        for (const auto& bc : x2.bicomponents()) {
          auto [sa, sc] = gal_detail::fatom_shift(pc_, a1, bc.lwt);
          auto prod = gal_detail::fatom_mul(pc_, sa, a2);
          if (!prod) continue;
          LocEl part = (sc * prod->second) * (x1 * bc.part);
          auto it = out.terms_.find(prod->first);
          if (it == out.terms_.end())
            out.terms_[prod->first] = std::move(part);
          else
            it->second += part;
        }
    out.prune();
    return out;
  }

  /// (x a)^* = a x^* = sum over left-graded parts y of x^* of y * a_{lwt y};
  /// both atom kinds are self-adjoint.
  GalEl star() const {
    GalEl out(pc_);
    for (const auto& [a, x] : terms_) {
      LocEl xs = x.star();
      for (const auto& bc : xs.bicomponents()) {
        auto [sa, sc] = gal_detail::fatom_shift(pc_, a, bc.lwt);
        LocEl part = sc * bc.part;
        auto it = out.terms_.find(sa);
        if (it == out.terms_.end())
          out.terms_[sa] = std::move(part);
        else
          it->second += part;
      }
    }
    out.prune();
    return out;
  }

  double norm() const {
    double s = 0.0;
    for (const auto& [a, x] : terms_) s += x.norm() * x.norm();
    return std::sqrt(s);
  }

  void prune(double tol = 0.0) {
    for (auto it = terms_.begin(); it != terms_.end();) {
      it->second.prune(tol);
      if (it->second.norm() == 0.0)
        it = terms_.erase(it);
      else
        ++it;
    }
  }

 private:
  PolCtxPtr pc_;
  std::map<FAtom, LocEl> terms_;
};

/// Right translation of a plain matrix-coefficient element by Y in the
/// compact form: on a block C of U_w it acts as C -> pi_w(Y)^T C.
inline PolEl translate_right_pol(const PolEl& x, const El& y) {
  PolEl res(x.pc());
  for (const auto& [w, c] : x.blocks()) {
    Mat m = x.pc()->rep(w).act(y).transpose() * c;
    for (int j = 0; j < m.cols(); ++j) {
      Vec b = Vec::Zero(m.cols());
      b(j) = 1.0;
      res += PolEl::matrix_coeff(x.pc(), w, Vec(m.col(j)), b);
    }
  }
  res.prune();
  return res;
}

/// The implementing element e_r = (1 - q_r^2)^{-1} b_{w_r}^{-1}
/// (b_{w_r} <| E_r), computed in closed form: a localized matrix coefficient
/// of the fundamental representation at the r-th node.
inline GalEl e_gal(PolCtxPtr pc, int r) {
  const RootDatum& rd = pc->rd();
  Weight wr = rd.fundamental(r);
  const Irrep& v = pc->rep(wr);
  Mat em = v.act(El::E(pc->uq(), Pres::Uqk, r));
  Vec xi = Vec::Zero(v.dim());
  xi(v.highest()) = 1.0;
  double scale = 1.0 / (1.0 - pc->qpow(Rational(2 * rd.d(r))));
  PolEl p = scale * PolEl::matrix_coeff(pc, wr, Vec(em.transpose() * xi),
                                        v.eta_low());
  LocEl loc = LocEl::b_formal(pc, wneg(wr)) * LocEl::from_pol(p);
  return GalEl::from_loc(loc);
}

/// k_w = q^{-(w,w)/2} z_w u_{-w}, in normal order q^{(w,w)/2} u_{-w} z_w.
inline GalEl k_gal(PolCtxPtr pc, const Weight& w) {
  double s = pc->qpow(pc->rd().pairing(w, w) / 2);
  return s * GalEl::term(pc, LocEl::u_el(pc, wneg(w)), FAtom{FAtom::Zchar, w});
}

/// l_w = q^{-(w,w)/2} u_w z_w (already normal ordered).
inline GalEl l_gal(PolCtxPtr pc, const Weight& w) {
  double s = pc->qpow(-pc->rd().pairing(w, w) / 2);
  return s * GalEl::term(pc, LocEl::u_el(pc, w), FAtom{FAtom::Zchar, w});
}

/// f_r = e_r^* l_{alpha_r}^{-1}, with l_w^{-1} = l_{-w}.
inline GalEl f_gal(PolCtxPtr pc, int r) {
  return e_gal(pc, r).star() * l_gal(pc, wneg(pc->rd().alpha(r)));
}

/// x_r = u_{alpha_r} e_r.
inline GalEl x_gal(PolCtxPtr pc, int r) {
  return GalEl::u_gal(pc, pc->rd().alpha(r)) * e_gal(pc, r);
}

/// Norm of the image under the localization identification b_w = u_w |b|_w:
/// left-multiply by enough big-cell coefficients to clear all negative formal
/// |b| exponents (injective), then convert the remaining formal factors into
/// exact products of matrix coefficients and collect per u-exponent and
/// function atom.  Vanishing of this norm is equality in the localization.
inline double reduced_norm(const GalEl& g) {
  if (g.is_zero()) return 0.0;
  PolCtxPtr pc = g.pc();
  int n = pc->rd().rank();
  Weight nu = wzero(n);
  for (const auto& [atom, loc] : g.terms())
    for (const auto& [k, x] : loc.terms())
      for (int r = 0; r < n; ++r)
        nu[r] = std::max(nu[r], -k.second[r]);
  GalEl h = GalEl::b_gal(pc, nu) * g;
  double s = 0.0;
  for (const auto& [atom, loc] : h.terms()) {
    std::map<Weight, PolEl> parts;
    for (const auto& [k, x] : loc.terms()) {
      PolEl y = wis_zero(k.second) ? x : PolEl::b_el(pc, k.second) * x;
      Weight key = wsub(k.first, k.second);
      auto it = parts.find(key);
      if (it == parts.end())
        parts[key] = std::move(y);
      else
        it->second += y;
    }
    for (const auto& [key, y] : parts) s += y.norm() * y.norm();
  }
  return std::sqrt(s);
}

/// The representing *-homomorphism on the twisted doubled presentation
/// (U_w, Z_w, E_r, F_r); monomials in the doubled Borel presentations are
/// interpreted through K_w -> k_w, L_w -> l_w term by term.
inline GalEl pi_gal(PolCtxPtr pc, const El& x) {
  Pres p = x.pres();
  if (p != Pres::UqTilde0 && p != Pres::UqPlus && p != Pres::Uq0)
    throw std::invalid_argument("pi_gal: unsupported presentation");
  CtxPtr ctx = x.ctx();
  GalEl acc(pc);
  for (const auto& [m, c] : x.terms()) {
    GalEl t = GalEl::one(pc);
    for (const Atom& a : El::to_atoms(m)) {
      GalEl g;
      switch (a.kind) {
        case Atom::CartA:
          g = (p == Pres::UqTilde0) ? GalEl::u_gal(pc, a.w) : k_gal(pc, a.w);
          break;
        case Atom::CartB:
          g = (p == Pres::UqTilde0) ? GalEl::z_gal(pc, a.w) : l_gal(pc, a.w);
          break;
        case Atom::E:
          g = e_gal(pc, a.idx);
          break;
        case Atom::F:
          g = f_gal(pc, a.idx);
          break;
      }
      t = t * g;
    }
    acc += ctx->to_double(c, pc->q()) * t;
  }
  return acc;
}

/// Adjoint-form translation by one generator, realized by conjugation with
/// the implementing multipliers: pi(S(g_(1))) x pi(g_(2)) evaluated for the
/// generator coproducts.
inline GalEl adjoint_letter(const GalEl& x, const Atom& a, CtxPtr ctx) {
  PolCtxPtr pc = x.pc();
  const RootDatum& rd = ctx->rd();
  switch (a.kind) {
    case Atom::CartA:
      return k_gal(pc, wneg(a.w)) * x * k_gal(pc, a.w);
    case Atom::CartB:
      return l_gal(pc, wneg(a.w)) * x * l_gal(pc, a.w);
    case Atom::E: {
      Weight ar = rd.alpha(a.idx);
      GalEl er = e_gal(pc, a.idx);
      return x * er - er * (k_gal(pc, wneg(ar)) * x * k_gal(pc, ar));
    }
    case Atom::F: {
      Weight ar = rd.alpha(a.idx);
      GalEl fr = f_gal(pc, a.idx);
      return l_gal(pc, ar) * (x * fr - fr * x);
    }
  }
  return GalEl(pc);
}

/// Adjoint-form translation x |> X = pi(S(X_(1))) x pi(X_(2)) for X in the
/// doubled Borel presentation, extended over monomials letter by letter via
/// the right-action property x |> (gh) = (x |> g) |> h.
inline GalEl adjoint_translate(const GalEl& x, const El& big) {
  if (big.pres() != Pres::UqPlus)
    throw std::invalid_argument("adjoint_translate: expects the doubled Borel");
  PolCtxPtr pc = x.pc();
  CtxPtr ctx = big.ctx();
  GalEl acc(pc);
  for (const auto& [m, c] : big.terms()) {
    GalEl t = x;
    for (const Atom& a : El::to_atoms(m)) t = adjoint_letter(t, a, ctx);
    acc += ctx->to_double(c, pc->q()) * t;
  }
  return acc;
}

}  // namespace qb
