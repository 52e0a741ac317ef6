#include "statevec.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

namespace kgm {

namespace {

inline std::size_t insert_zero(std::size_t v, int pos) {
  const std::size_t low = v & ((std::size_t(1) << pos) - 1);
  return ((v >> pos) << (pos + 1)) | low;
}

void check_qubit(const StateVector& s, int q) {
  if (q < 0 || q >= s.n_qubits()) throw DimError("qubit index out of bounds");
}

// One-qubit gate as paired-amplitude update.
template <typename F>
void for_bit_pairs(StateVector& s, int q, F&& f) {
  check_qubit(s, q);
  const std::size_t mask = std::size_t(1) << q;
  parallel_for(s.dim() >> 1, [&](std::size_t b0, std::size_t b1) {
    cplx* a = s.data();
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t i0 = insert_zero(b, q);
      f(a[i0], a[i0 | mask]);
    }
  });
}

}  // namespace

StateVector::StateVector(int n_qubits, int max_qubits) : n_(n_qubits) {
  if (n_qubits < 1 || n_qubits > max_qubits)
    throw ArgumentError("qubit count " + std::to_string(n_qubits) + " outside [1, " +
                        std::to_string(max_qubits) + "]");
  amp_.assign(std::size_t(1) << n_, cplx(0, 0));
  amp_[0] = 1.0;
}

StateVector StateVector::basis_state(int n_qubits, const std::string& bits) {
  if ((int)bits.size() != n_qubits)
    throw ArgumentError("bitstring length != qubit count");
  StateVector s(n_qubits);
  std::size_t idx = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') throw ArgumentError("bitstring must be 0/1");
    idx = (idx << 1) | (c == '1');
  }
  s.amp_[0] = 0.0;
  s.amp_[idx] = 1.0;
  return s;
}

double StateVector::norm() const {
  double n2 = parallel_sum(dim(), [this](std::size_t b0, std::size_t b1) {
    double acc = 0;
    for (std::size_t i = b0; i < b1; ++i) acc += std::norm(amp_[i]);
    return acc;
  });
  return std::sqrt(n2);
}

void StateVector::normalize() {
  double n = norm();
  if (n == 0.0) throw ArgumentError("cannot normalize the zero vector");
  const double inv = 1.0 / n;
  parallel_for(dim(), [&](std::size_t b0, std::size_t b1) {
    for (std::size_t i = b0; i < b1; ++i) amp_[i] *= inv;
  });
}

void apply_heisenberg(StateVector& s, int k, int l, double angle) {
  if (k == l) throw ArgumentError("heisenberg gate needs two distinct qubits");
  check_qubit(s, k);
  check_qubit(s, l);
  if (k > l) std::swap(k, l);
  const std::size_t mk = std::size_t(1) << k, ml = std::size_t(1) << l;
  const cplx diag = std::polar(1.0, -angle);          // e^{-i angle} on 00 and 11
  const cplx ph = std::polar(1.0, angle);             // e^{+i angle} on the mixing block
  const double c = std::cos(2 * angle), sn = std::sin(2 * angle);
  const cplx mix_d = ph * c, mix_o = ph * cplx(0, -sn);
  parallel_for(s.dim() >> 2, [&](std::size_t b0, std::size_t b1) {
    cplx* a = s.data();
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t i00 = insert_zero(insert_zero(b, k), l);
      const std::size_t i01 = i00 | mk, i10 = i00 | ml;
      a[i00] *= diag;
      a[i00 | mk | ml] *= diag;
      const cplx u = a[i01], v = a[i10];
      a[i01] = mix_d * u + mix_o * v;
      a[i10] = mix_o * u + mix_d * v;
    }
  });
}

void apply_hadamard(StateVector& s, int q) {
  constexpr double r = 0.70710678118654752440;
  for_bit_pairs(s, q, [r](cplx& a0, cplx& a1) {
    const cplx u = a0, v = a1;
    a0 = r * (u + v);
    a1 = r * (u - v);
  });
}

void apply_sdg(StateVector& s, int q) {
  for_bit_pairs(s, q, [](cplx&, cplx& a1) { a1 *= cplx(0, -1); });
}

void apply_pauli_x(StateVector& s, int q) {
  for_bit_pairs(s, q, [](cplx& a0, cplx& a1) { std::swap(a0, a1); });
}

void apply_pauli_z(StateVector& s, int q) {
  for_bit_pairs(s, q, [](cplx&, cplx& a1) { a1 = -a1; });
}

void apply_cnot(StateVector& s, int control, int target) {
  if (control == target) throw ArgumentError("cnot needs distinct qubits");
  check_qubit(s, control);
  check_qubit(s, target);
  const std::size_t mc = std::size_t(1) << control, mt = std::size_t(1) << target;
  parallel_for(s.dim() >> 1, [&](std::size_t b0, std::size_t b1) {
    cplx* a = s.data();
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t i = insert_zero(b, target);  // target bit 0
      if (i & mc) std::swap(a[i], a[i | mt]);
    }
  });
}

void apply_swap(StateVector& s, int k, int l) {
  if (k == l) throw ArgumentError("swap needs distinct qubits");
  check_qubit(s, k);
  check_qubit(s, l);
  if (k > l) std::swap(k, l);
  const std::size_t mk = std::size_t(1) << k, ml = std::size_t(1) << l;
  parallel_for(s.dim() >> 2, [&](std::size_t b0, std::size_t b1) {
    cplx* a = s.data();
    for (std::size_t b = b0; b < b1; ++b) {
      const std::size_t i00 = insert_zero(insert_zero(b, k), l);
      std::swap(a[i00 | mk], a[i00 | ml]);
    }
  });
}

void apply_singlet_prep(StateVector& s, int k, int l) {
  apply_hadamard(s, k);
  apply_cnot(s, k, l);
  apply_pauli_x(s, l);
  apply_pauli_z(s, k);
}

void apply_singlet_unprep(StateVector& s, int k, int l) {
  apply_pauli_z(s, k);
  apply_pauli_x(s, l);
  apply_cnot(s, k, l);
  apply_hadamard(s, k);
}

cplx overlap(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) throw DimError("overlap: qubit counts differ");
  return parallel_sum_c(a.dim(), [&](std::size_t b0, std::size_t b1) {
    cplx acc(0, 0);
    const cplx* pa = a.data();
    const cplx* pb = b.data();
    for (std::size_t i = b0; i < b1; ++i) acc += std::conj(pa[i]) * pb[i];
    return acc;
  });
}

double fidelity(const StateVector& a, const StateVector& b) {
  return std::norm(overlap(a, b));
}

namespace {

StateVector rotated_copy(const StateVector& s, char axis) {
  StateVector t = s;
  if (axis == 'x' || axis == 'X') {
    for (int q = 0; q < s.n_qubits(); ++q) apply_hadamard(t, q);
  } else if (axis == 'y' || axis == 'Y') {
    for (int q = 0; q < s.n_qubits(); ++q) {
      apply_sdg(t, q);
      apply_hadamard(t, q);
    }
  } else if (axis != 'z' && axis != 'Z') {
    throw ArgumentError("axis must be one of x, y, z");
  }
  return t;
}

// mean and variance of the diagonal spin-total observable on a (rotated) state
void diag_moments(const StateVector& t, char axis, double& mean, double& var) {
  const int n = t.n_qubits();
  mean = parallel_sum(t.dim(), [&](std::size_t b0, std::size_t b1) {
    double acc = 0;
    for (std::size_t i = b0; i < b1; ++i)
      acc += std::norm(t.data()[i]) * outcome_value(axis, n, i);
    return acc;
  });
  double m2 = parallel_sum(t.dim(), [&](std::size_t b0, std::size_t b1) {
    double acc = 0;
    for (std::size_t i = b0; i < b1; ++i) {
      const double v = outcome_value(axis, n, i);
      acc += std::norm(t.data()[i]) * v * v;
    }
    return acc;
  });
  var = m2 - mean * mean;
}

}  // namespace

double total_spin(const StateVector& s, char axis) {
  StateVector t = rotated_copy(s, axis);
  double mean, var;
  diag_moments(t, axis, mean, var);
  return mean;
}

SectorCheck sector_check(const StateVector& s, char axis, double value, double tol) {
  StateVector t = rotated_copy(s, axis);
  SectorCheck out;
  diag_moments(t, axis, out.mean, out.variance);
  out.is_eigenstate = out.variance < tol;
  out.matches = out.is_eigenstate && std::abs(out.mean - value) < std::max(tol, 1e-9);
  return out;
}

ShotBatch sample(const StateVector& s, char basis, long shots, std::uint64_t seed,
                 bool post_select) {
  if (shots < 1) throw ArgumentError("need at least one shot");
  StateVector t = rotated_copy(s, basis);
  const std::size_t dim = t.dim();
  std::vector<double> cdf(dim);
  double acc = 0;
  for (std::size_t i = 0; i < dim; ++i) {
    acc += std::norm(t.data()[i]);
    cdf[i] = acc;
  }
  double mean, var;
  diag_moments(t, basis, mean, var);
  const int sector = (int)std::lround(mean);

  ShotBatch out;
  out.basis = basis;
  out.n_qubits = t.n_qubits();
  out.post_selected = post_select;
  out.sector = sector;
  std::mt19937_64 gen(seed);
  for (long sh = 0; sh < shots; ++sh) {
    const double u = canonical_double(gen()) * acc;
    const std::size_t idx =
        std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
    const std::uint64_t m = std::min(idx, dim - 1);
    if (post_select && outcome_value(basis, t.n_qubits(), m) != sector) {
      ++out.discarded;
      continue;
    }
    ++out.kept;
    out.shots.push_back(m);
  }
  return out;
}

std::string ShotBatch::to_csv() const {
  std::string out;
  out.reserve(shots.size() * (n_qubits + 1));
  for (std::uint64_t m : shots) {
    for (int q = n_qubits - 1; q >= 0; --q) out.push_back((m >> q) & 1 ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

void dump_amplitudes(const StateVector& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw IoError("cannot open " + path);
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const double re = s.data()[i].real(), im = s.data()[i].imag();
    std::fwrite(&re, sizeof re, 1, f);
    std::fwrite(&im, sizeof im, 1, f);
  }
  std::fclose(f);
}

}  // namespace kgm
