// Dense complex state-vector engine for collections of D-level systems,
// together with the algebraic structures attached to the two distinguished
// observables:
//
//   point structure  (Z): copying in the computational basis
//                         m_Z|i,j> = δ_ij|i>,  u_Z = Σ_j|j>
//   group structure  (X): convolution over Z_D
//                         m_X|i,j> = |i+j mod D>,  u_X = |0>
//
// The X-measurement basis is the Fourier basis |χ_t> = D^{-1/2} Σ_j ω^{tj}|j>
// with ω = e^{2πi/D}.  Two independent pipelines compute the outcome
// distribution of "GHZ + per-party diagonal phases + all-party X measurement":
//
//   Route A (state vector): build the D^N-amplitude vector, apply diagonal
//     gates, Fourier-transform every axis, take squared magnitudes.
//   Route B (closed form): the distribution depends only on the outcome sum
//     σ = Σ g_i mod D, with P(g) = D^{-(N+1)} |Σ_j e^{iβ_j} ω^{-jσ}|² where
//     β_j = Σ_i b^i_j is the per-level phase total.
//
// Their agreement (within tolerance) is itself a tested law, not an assumed
// one.  All numerics are double precision; every comparison takes an explicit
// tolerance (default 1e-9).

#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <vector>

#include "mermin/errors.hpp"

namespace mermin::qudit {

using Amp = std::complex<double>;

inline constexpr double kTau = 2.0 * std::numbers::pi;
inline constexpr double kDefaultTol = 1e-9;

// ── State vectors ──────────────────────────────────────────────────────────

// Amplitudes over (Z_D)^n with party 0 as the most significant digit:
// index(o_0,…,o_{n-1}) = ((o_0·D + o_1)·D + …)·D + o_{n-1}.
struct StateVector {
  long long d = 2;
  int parties = 1;
  std::vector<Amp> amps;
};

inline long long state_size(long long d, int parties, long long bound) {
  if (d < 2) throw malformed_input("local dimension must be at least 2");
  if (parties < 1) throw malformed_input("need at least one system");
  long long size = 1;
  for (int i = 0; i < parties; ++i) {
    if (size > bound / d)
      throw resource_error("state vector exceeds the amplitude bound");
    size *= d;
  }
  return size;
}

inline std::vector<long long> outcome_digits(long long index, long long d,
                                             int parties) {
  std::vector<long long> o(parties);
  for (int i = parties - 1; i >= 0; --i) {
    o[i] = index % d;
    index /= d;
  }
  return o;
}

inline long long outcome_index(const std::vector<long long>& o, long long d) {
  long long index = 0;
  for (long long v : o) index = index * d + v;
  return index;
}

inline double norm(const StateVector& s) {
  double n = 0;
  for (const Amp& a : s.amps) n += std::norm(a);
  return std::sqrt(n);
}

// (1/√D)·Σ_j |j…j> on `parties` systems.
inline StateVector ghz(long long d, int parties,
                       long long bound = kDefaultAmplitudeBound) {
  long long size = state_size(d, parties, bound);
  StateVector s{d, parties, std::vector<Amp>(size, Amp(0, 0))};
  long long step = 0, stride = 1;
  for (int i = 0; i < parties; ++i) stride *= d;  // stride = D^parties
  stride = (stride - 1) / (d - 1);                // Σ_{i<parties} D^i = index step of |j…j>
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (long long j = 0; j < d; ++j, step += stride) s.amps[step] = Amp(w, 0);
  return s;
}

// Diagonal phase gate diag(1, e^{ib_1}, …, e^{ib_{D-1}}) applied to one
// party; `angles` holds b_1 … b_{D-1} in radians (b_0 = 0 implicitly).
inline void apply_phase(StateVector& s, int party,
                        const std::vector<double>& angles) {
  if (party < 0 || party >= s.parties) throw malformed_input("party out of range");
  if (static_cast<long long>(angles.size()) != s.d - 1)
    throw malformed_input("phase gate needs D-1 angles");
  std::vector<Amp> phase(s.d, Amp(1, 0));
  for (long long j = 1; j < s.d; ++j) phase[j] = std::polar(1.0, angles[j - 1]);
  long long inner = 1;
  for (int i = party + 1; i < s.parties; ++i) inner *= s.d;
  const long long outer = static_cast<long long>(s.amps.size()) / (inner * s.d);
  for (long long o = 0; o < outer; ++o)
    for (long long j = 0; j < s.d; ++j) {
      Amp* block = s.amps.data() + (o * s.d + j) * inner;
      for (long long i = 0; i < inner; ++i) block[i] *= phase[j];
    }
}

// Joint X-measurement: probability of every outcome tuple g ∈ (Z_D)^n.
// Implemented by applying the conjugate Fourier row ⟨χ_g| = D^{-1/2} Σ ω^{-gj}⟨j|
// along every axis, then reading squared magnitudes.
inline std::vector<double> measure_all_x(StateVector s) {
  const long long d = s.d;
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<Amp> omega(d * d);
  for (long long g = 0; g < d; ++g)
    for (long long j = 0; j < d; ++j)
      omega[g * d + j] = std::polar(w, -kTau * static_cast<double>(g * j) / d);
  std::vector<Amp> scratch(d);
  long long inner = 1;
  for (int party = s.parties - 1; party >= 0; --party) {
    const long long outer = static_cast<long long>(s.amps.size()) / (inner * d);
    for (long long o = 0; o < outer; ++o)
      for (long long i = 0; i < inner; ++i) {
        Amp* base = s.amps.data() + o * d * inner + i;
        for (long long g = 0; g < d; ++g) {
          Amp acc(0, 0);
          for (long long j = 0; j < d; ++j) acc += omega[g * d + j] * base[j * inner];
          scratch[g] = acc;
        }
        for (long long g = 0; g < d; ++g) base[g * inner] = scratch[g];
      }
    inner *= d;
  }
  std::vector<double> probs(s.amps.size());
  for (std::size_t i = 0; i < s.amps.size(); ++i) probs[i] = std::norm(s.amps[i]);
  return probs;
}

// Route A: the full pipeline.  `phases[i]` holds party i's D-1 gate angles.
inline std::vector<double> mermin_outcome_distribution(
    long long d, int parties, const std::vector<std::vector<double>>& phases,
    long long bound = kDefaultAmplitudeBound) {
  if (static_cast<int>(phases.size()) != parties)
    throw malformed_input("need one phase vector per party");
  StateVector s = ghz(d, parties, bound);
  for (int i = 0; i < parties; ++i) apply_phase(s, i, phases[i]);
  return measure_all_x(s);
}

// Route B: closed form.  The outcome distribution is constant on each
// outcome-sum class σ, with class weight |Σ_j e^{iβ_j} ω^{-jσ}|² / D².
inline std::vector<double> simplified_distribution(
    long long d, int parties, const std::vector<std::vector<double>>& phases,
    long long bound = kDefaultAmplitudeBound) {
  if (static_cast<int>(phases.size()) != parties)
    throw malformed_input("need one phase vector per party");
  std::vector<double> beta(d, 0.0);
  for (const auto& b : phases) {
    if (static_cast<long long>(b.size()) != d - 1)
      throw malformed_input("phase gate needs D-1 angles");
    for (long long j = 1; j < d; ++j) beta[j] += b[j - 1];
  }
  std::vector<double> class_prob(d, 0.0);
  for (long long sigma = 0; sigma < d; ++sigma) {
    Amp acc(0, 0);
    for (long long j = 0; j < d; ++j)
      acc += std::polar(1.0, beta[j] - kTau * static_cast<double>(j * sigma) / d);
    class_prob[sigma] = std::norm(acc) / static_cast<double>(d * d);
  }
  long long size = state_size(d, parties, bound);
  double per_tuple = 1.0;
  for (int i = 0; i < parties - 1; ++i) per_tuple /= static_cast<double>(d);
  std::vector<double> probs(size);
  for (long long idx = 0; idx < size; ++idx) {
    long long sigma = 0, rest = idx;
    for (int i = 0; i < parties; ++i) {
      sigma += rest % d;
      rest /= d;
    }
    probs[idx] = class_prob[sigma % d] * per_tuple;
  }
  return probs;
}

// ── Dense operators ────────────────────────────────────────────────────────

struct LinOperator {
  std::size_t rows = 0, cols = 0;
  std::vector<Amp> a;  // row-major

  Amp& at(std::size_t r, std::size_t c) { return a[r * cols + c]; }
  const Amp& at(std::size_t r, std::size_t c) const { return a[r * cols + c]; }
};

inline LinOperator zero_op(std::size_t rows, std::size_t cols) {
  return {rows, cols, std::vector<Amp>(rows * cols, Amp(0, 0))};
}

inline LinOperator identity_op(std::size_t n) {
  LinOperator id = zero_op(n, n);
  for (std::size_t i = 0; i < n; ++i) id.at(i, i) = Amp(1, 0);
  return id;
}

inline LinOperator mul(const LinOperator& f, const LinOperator& g) {
  if (f.cols != g.rows) throw malformed_input("operator dimension mismatch");
  LinOperator out = zero_op(f.rows, g.cols);
  for (std::size_t r = 0; r < f.rows; ++r)
    for (std::size_t k = 0; k < f.cols; ++k) {
      const Amp frk = f.at(r, k);
      if (frk == Amp(0, 0)) continue;
      for (std::size_t c = 0; c < g.cols; ++c) out.at(r, c) += frk * g.at(k, c);
    }
  return out;
}

inline LinOperator kron(const LinOperator& f, const LinOperator& g) {
  LinOperator out = zero_op(f.rows * g.rows, f.cols * g.cols);
  for (std::size_t r1 = 0; r1 < f.rows; ++r1)
    for (std::size_t c1 = 0; c1 < f.cols; ++c1) {
      const Amp v = f.at(r1, c1);
      if (v == Amp(0, 0)) continue;
      for (std::size_t r2 = 0; r2 < g.rows; ++r2)
        for (std::size_t c2 = 0; c2 < g.cols; ++c2)
          out.at(r1 * g.rows + r2, c1 * g.cols + c2) = v * g.at(r2, c2);
    }
  return out;
}

inline LinOperator dagger(const LinOperator& f) {
  LinOperator out = zero_op(f.cols, f.rows);
  for (std::size_t r = 0; r < f.rows; ++r)
    for (std::size_t c = 0; c < f.cols; ++c) out.at(c, r) = std::conj(f.at(r, c));
  return out;
}

inline bool approx_equal(const LinOperator& f, const LinOperator& g,
                         double tol = kDefaultTol) {
  if (f.rows != g.rows || f.cols != g.cols) return false;
  for (std::size_t i = 0; i < f.a.size(); ++i)
    if (std::abs(f.a[i] - g.a[i]) > tol) return false;
  return true;
}

inline bool is_unitary(const LinOperator& f, double tol = kDefaultTol) {
  return f.rows == f.cols &&
         approx_equal(mul(dagger(f), f), identity_op(f.cols), tol);
}

inline LinOperator column(const std::vector<Amp>& v) {
  return {v.size(), 1, v};
}

// diag(1, e^{ib_1}, …, e^{ib_{D-1}}) as an operator.
inline LinOperator z_phase_gate(const std::vector<double>& angles) {
  const std::size_t d = angles.size() + 1;
  if (d < 2) throw malformed_input("phase gate needs D-1 angles with D >= 2");
  LinOperator g = zero_op(d, d);
  g.at(0, 0) = Amp(1, 0);
  for (std::size_t j = 1; j < d; ++j) g.at(j, j) = std::polar(1.0, angles[j - 1]);
  return g;
}

inline std::vector<Amp> fourier_state(long long d, long long t) {
  std::vector<Amp> v(d);
  const double w = 1.0 / std::sqrt(static_cast<double>(d));
  for (long long j = 0; j < d; ++j)
    v[j] = std::polar(w, kTau * static_cast<double>(((t % d) * j) % d) / d);
  return v;
}

// The measurement basis of "apply phases b, then measure X": outcome t
// projects onto gate(b)†|χ_t>.
inline std::vector<std::vector<Amp>> phased_measurement_basis(
    long long d, const std::vector<double>& angles) {
  LinOperator gd = dagger(z_phase_gate(angles));
  std::vector<std::vector<Amp>> basis;
  for (long long t = 0; t < d; ++t) {
    std::vector<Amp> chi = fourier_state(d, t), v(d);
    for (long long r = 0; r < d; ++r) v[r] = gd.at(r, r) * chi[r];
    basis.push_back(std::move(v));
  }
  return basis;
}

// Unnormalized phase state Σ_j e^{iθ_j}|j> with θ_0 = 0; satisfies
// m_Z(α ⊗ ᾱ) = u_Z exactly, which is its defining law.
inline std::vector<Amp> phase_state(long long d,
                                    const std::vector<double>& angles) {
  if (static_cast<long long>(angles.size()) != d - 1)
    throw malformed_input("phase state needs D-1 angles");
  std::vector<Amp> v(d);
  v[0] = Amp(1, 0);
  for (long long j = 1; j < d; ++j) v[j] = std::polar(1.0, angles[j - 1]);
  return v;
}

// |j> ↦ |−j mod D>.  Self-inverse for every D.
inline LinOperator antipode(long long d) {
  if (d < 2) throw malformed_input("local dimension must be at least 2");
  LinOperator s = zero_op(d, d);
  for (long long j = 0; j < d; ++j) s.at(((d - j) % d), j) = Amp(1, 0);
  return s;
}

// ── Observable structures and their laws ──────────────────────────────────

struct FrobeniusStructure {
  LinOperator mult;    // A⊗A → A
  LinOperator unit;    // C → A
  LinOperator comult;  // A → A⊗A
  LinOperator counit;  // A → C
};

// Copying in the computational basis.
inline FrobeniusStructure point_structure(long long dd) {
  const std::size_t d = static_cast<std::size_t>(dd);
  FrobeniusStructure f;
  f.mult = zero_op(d, d * d);
  f.comult = zero_op(d * d, d);
  f.unit = zero_op(d, 1);
  f.counit = zero_op(1, d);
  for (std::size_t i = 0; i < d; ++i) {
    f.mult.at(i, i * d + i) = Amp(1, 0);
    f.comult.at(i * d + i, i) = Amp(1, 0);
    f.unit.at(i, 0) = Amp(1, 0);
    f.counit.at(0, i) = Amp(1, 0);
  }
  return f;
}

// Convolution over Z_D.
inline FrobeniusStructure group_structure(long long dd) {
  const std::size_t d = static_cast<std::size_t>(dd);
  FrobeniusStructure f;
  f.mult = zero_op(d, d * d);
  f.comult = zero_op(d * d, d);
  f.unit = zero_op(d, 1);
  f.counit = zero_op(1, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      f.mult.at((i + j) % d, i * d + j) = Amp(1, 0);
      f.comult.at(i * d + j, (i + j) % d) = Amp(1, 0);
    }
  f.unit.at(0, 0) = Amp(1, 0);
  f.counit.at(0, 0) = Amp(1, 0);
  return f;
}

struct ObservablePair {
  long long d;
  FrobeniusStructure z;  // point structure (copying)
  FrobeniusStructure x;  // group structure (convolution)
};

inline ObservablePair canonical_pair(long long d) {
  return {d, point_structure(d), group_structure(d)};
}

struct LawReport {
  bool frobenius_ok = false;     // both structures associative/unital/Frobenius
  bool quasi_special_ok = false; // m∘δ = N·1 with invertible N, both structures
  bool bialgebra_ok = false;     // δ_Z m_X = (m_X⊗m_X)(1 σ 1)(δ_Z⊗δ_Z)
  bool coherence_ok = false;     // δ_Z u_X = u_X⊗u_X, ε_Z m_X = ε_Z⊗ε_Z, ε_Z u_X = 1
  double quasi_special_scalar = 0.0;  // the N of the group structure
  std::vector<std::vector<Amp>> point_copyables;  // states δ_Z copies
  std::vector<std::vector<Amp>> group_copyables;  // states δ_X copies (up to scalar)
  double tol = kDefaultTol;

  bool all_ok() const {
    return frobenius_ok && quasi_special_ok && bialgebra_ok && coherence_ok;
  }
};

namespace detail {

inline LinOperator swap_op(std::size_t d) {
  LinOperator s = zero_op(d * d, d * d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) s.at(j * d + i, i * d + j) = Amp(1, 0);
  return s;
}

inline bool frobenius_holds(const FrobeniusStructure& f, std::size_t d,
                            double tol) {
  LinOperator id = identity_op(d);
  // Associativity and unit laws.
  if (!approx_equal(mul(f.mult, kron(f.mult, id)), mul(f.mult, kron(id, f.mult)), tol))
    return false;
  if (!approx_equal(mul(f.mult, kron(f.unit, id)), id, tol)) return false;
  if (!approx_equal(mul(f.mult, kron(id, f.unit)), id, tol)) return false;
  if (!approx_equal(mul(kron(f.counit, id), f.comult), id, tol)) return false;
  // The Frobenius identity: (1⊗m)(δ⊗1) = δm = (m⊗1)(1⊗δ).
  LinOperator middle = mul(f.comult, f.mult);
  if (!approx_equal(mul(kron(id, f.mult), kron(f.comult, id)), middle, tol))
    return false;
  return approx_equal(mul(kron(f.mult, id), kron(id, f.comult)), middle, tol);
}

// m∘δ must be an invertible scalar times the identity; returns the scalar or
// 0 on failure.
inline Amp quasi_special_scalar_of(const FrobeniusStructure& f, std::size_t d,
                                   double tol) {
  LinOperator md = mul(f.mult, f.comult);
  Amp n = md.at(0, 0);
  if (std::abs(n) <= tol) return Amp(0, 0);
  LinOperator scaled = identity_op(d);
  for (Amp& v : scaled.a) v *= n;
  return approx_equal(md, scaled, tol) ? n : Amp(0, 0);
}

// δ|ψ> = λ·|ψ>⊗|ψ> for some λ with |λ| > tol?
inline bool copies_state(const LinOperator& comult, const std::vector<Amp>& psi,
                         double tol) {
  std::vector<Amp> lhs(psi.size() * psi.size(), Amp(0, 0));
  for (std::size_t r = 0; r < comult.rows; ++r)
    for (std::size_t c = 0; c < comult.cols; ++c) lhs[r] += comult.at(r, c) * psi[c];
  std::vector<Amp> rhs(psi.size() * psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = 0; j < psi.size(); ++j) rhs[i * psi.size() + j] = psi[i] * psi[j];
  Amp num(0, 0), den(0, 0);
  for (std::size_t i = 0; i < lhs.size(); ++i) {
    num += std::conj(rhs[i]) * lhs[i];
    den += std::conj(rhs[i]) * rhs[i];
  }
  if (std::abs(den) <= tol) return false;
  Amp lambda = num / den;
  if (std::abs(lambda) <= tol) return false;
  for (std::size_t i = 0; i < lhs.size(); ++i)
    if (std::abs(lhs[i] - lambda * rhs[i]) > tol) return false;
  return true;
}

}  // namespace detail

// Checks every law the observable pair is supposed to satisfy, on concrete
// matrices.  Copyable states are detected from the two canonical candidate
// families (computational and Fourier bases).
inline LawReport verify_laws(const ObservablePair& pair,
                             double tol = kDefaultTol) {
  const std::size_t d = static_cast<std::size_t>(pair.d);
  LawReport rep;
  rep.tol = tol;
  rep.frobenius_ok = detail::frobenius_holds(pair.z, d, tol) &&
                     detail::frobenius_holds(pair.x, d, tol);
  Amp nz = detail::quasi_special_scalar_of(pair.z, d, tol);
  Amp nx = detail::quasi_special_scalar_of(pair.x, d, tol);
  rep.quasi_special_ok = std::abs(nz) > tol && std::abs(nx) > tol;
  rep.quasi_special_scalar = nx.real();

  LinOperator id = identity_op(d);
  LinOperator lhs = mul(pair.z.comult, pair.x.mult);
  LinOperator shuffle = kron(kron(id, detail::swap_op(d)), id);
  LinOperator rhs = mul(kron(pair.x.mult, pair.x.mult),
                        mul(shuffle, kron(pair.z.comult, pair.z.comult)));
  rep.bialgebra_ok = approx_equal(lhs, rhs, tol);

  bool coh = approx_equal(mul(pair.z.comult, pair.x.unit),
                          kron(pair.x.unit, pair.x.unit), tol);
  coh = coh && approx_equal(mul(pair.z.counit, pair.x.mult),
                            kron(pair.z.counit, pair.z.counit), tol);
  LinOperator scalar = mul(pair.z.counit, pair.x.unit);
  coh = coh && std::abs(scalar.at(0, 0) - Amp(1, 0)) <= tol;
  rep.coherence_ok = coh;

  for (long long t = 0; t < pair.d; ++t) {
    std::vector<Amp> basis(d, Amp(0, 0));
    basis[t] = Amp(1, 0);
    std::vector<Amp> chi = fourier_state(pair.d, t);
    if (detail::copies_state(pair.z.comult, basis, tol))
      rep.point_copyables.push_back(std::move(basis));
    if (detail::copies_state(pair.x.comult, chi, tol))
      rep.group_copyables.push_back(std::move(chi));
  }
  return rep;
}

// D×D matrix of squared overlaps |⟨a_i|b_j⟩|².  Inputs must be orthonormal
// bases of the same dimension.
inline std::vector<std::vector<double>> complementarity_report(
    const std::vector<std::vector<Amp>>& a,
    const std::vector<std::vector<Amp>>& b, double tol = kDefaultTol) {
  const std::size_t d = a.size();
  if (b.size() != d || d == 0) throw malformed_input("bases of unequal size");
  for (const auto* basis : {&a, &b})
    for (std::size_t i = 0; i < d; ++i) {
      if ((*basis)[i].size() != d) throw malformed_input("basis vector of wrong length");
      for (std::size_t j = 0; j <= i; ++j) {
        Amp dot(0, 0);
        for (std::size_t k = 0; k < d; ++k)
          dot += std::conj((*basis)[i][k]) * (*basis)[j][k];
        if (std::abs(dot - (i == j ? Amp(1, 0) : Amp(0, 0))) > tol)
          throw domain_error("basis is not orthonormal");
      }
    }
  std::vector<std::vector<double>> report(d, std::vector<double>(d, 0.0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      Amp dot(0, 0);
      for (std::size_t k = 0; k < d; ++k) dot += std::conj(a[i][k]) * b[j][k];
      report[i][j] = std::norm(dot);
    }
  return report;
}

inline bool is_mutually_unbiased(const std::vector<std::vector<double>>& report,
                                 double tol = kDefaultTol) {
  const double expected = 1.0 / static_cast<double>(report.size());
  for (const auto& row : report)
    for (double v : row)
      if (std::abs(v - expected) > tol) return false;
  return true;
}

}  // namespace mermin::qudit
