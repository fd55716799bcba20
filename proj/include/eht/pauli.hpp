#pragma once

#include <bit>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eht/linalg.hpp"

namespace eht {

enum class Pauli : char { X = 'X', Y = 'Y', Z = 'Z' };

// Product of single-site Paulis on distinct sites, e.g. {{0,X},{1,Y}}.
// Sites are ascending; an empty string is the identity.
using PauliString = std::vector<std::pair<int, Pauli>>;

inline char pauli_letter(Pauli p) { return static_cast<char>(p); }

inline Pauli pauli_from_letter(char c) {
  switch (c) {
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: throw std::invalid_argument("unknown Pauli letter");
  }
}

inline std::string pauli_string_label(const PauliString& s) {
  std::string out;
  for (const auto& [site, p] : s) {
    if (!out.empty()) out += ' ';
    out += pauli_letter(p);
    out += std::to_string(site);
  }
  return out.empty() ? std::string("I") : out;
}

inline void validate_pauli_string(const PauliString& s, int n_sites) {
  int prev = -1;
  for (const auto& [site, p] : s) {
    (void)p;
    if (site <= prev) {
      throw std::invalid_argument("Pauli string sites must be ascending and distinct");
    }
    if (site < 0 || site >= n_sites) {
      throw std::invalid_argument("Pauli string site out of range");
    }
    prev = site;
  }
}

namespace detail {

// Site 0 is the leftmost spin and occupies the most significant bit of a
// basis index; bit value 0 encodes spin up (sigma_z = +1).
inline std::size_t site_mask(int site, int n_sites) {
  return std::size_t{1} << (n_sites - 1 - site);
}

struct CompiledString {
  std::size_t flip_mask = 0;   // X and Y sites
  std::size_t y_mask = 0;      // Y sites
  std::size_t zy_mask = 0;     // Z and Y sites (sign from bit parity)
  int n_y = 0;
};

inline CompiledString compile_string(const PauliString& s, int n_sites) {
  CompiledString c;
  for (const auto& [site, p] : s) {
    std::size_t m = site_mask(site, n_sites);
    switch (p) {
      case Pauli::X: c.flip_mask |= m; break;
      case Pauli::Y: c.flip_mask |= m; c.y_mask |= m; c.zy_mask |= m; ++c.n_y; break;
      case Pauli::Z: c.zy_mask |= m; break;
    }
  }
  return c;
}

// Phase of P|g> = phase * |g ^ flip_mask>.
// sigma_y|0> = i|1>, sigma_y|1> = -i|0>; sigma_z|b> = (-1)^b |b>.
inline cxd string_phase(const CompiledString& c, std::size_t g) {
  int zy_parity = std::popcount(g & c.zy_mask) & 1;
  double sign = zy_parity ? -1.0 : 1.0;
  switch (c.n_y & 3) {
    case 0: return cxd(sign, 0.0);
    case 1: return cxd(0.0, sign);
    case 2: return cxd(-sign, 0.0);
    default: return cxd(0.0, -sign);
  }
}

}  // namespace detail

// out += coeff * P acting on n_sites qubits, one column pass over the matrix.
inline void add_pauli_string(MatrixXcd& out, cxd coeff, const PauliString& s,
                             int n_sites) {
  validate_pauli_string(s, n_sites);
  const std::size_t d = dim_of(n_sites);
  if (static_cast<std::size_t>(out.rows()) != d ||
      static_cast<std::size_t>(out.cols()) != d) {
    throw std::invalid_argument("matrix dimension does not match site count");
  }
  const auto c = detail::compile_string(s, n_sites);
  for (std::size_t g = 0; g < d; ++g) {
    out(g ^ c.flip_mask, g) += coeff * detail::string_phase(c, g);
  }
}

// out += coeff * P |psi>.
inline void add_apply_pauli_string(VectorXcd& out, const VectorXcd& psi,
                                   cxd coeff, const PauliString& s,
                                   int n_sites) {
  validate_pauli_string(s, n_sites);
  const std::size_t d = dim_of(n_sites);
  if (static_cast<std::size_t>(psi.size()) != d ||
      static_cast<std::size_t>(out.size()) != d) {
    throw std::invalid_argument("vector dimension does not match site count");
  }
  const auto c = detail::compile_string(s, n_sites);
  for (std::size_t g = 0; g < d; ++g) {
    out(g ^ c.flip_mask) += coeff * detail::string_phase(c, g) * psi(g);
  }
}

inline VectorXcd apply_pauli_string(const VectorXcd& psi, const PauliString& s,
                                    int n_sites) {
  VectorXcd out = VectorXcd::Zero(psi.size());
  add_apply_pauli_string(out, psi, cxd(1.0, 0.0), s, n_sites);
  return out;
}

// <psi|P|psi>; real for any Hermitian Pauli string.
inline double pauli_expectation(const VectorXcd& psi, const PauliString& s,
                                int n_sites) {
  return psi.dot(apply_pauli_string(psi, s, n_sites)).real();
}

// out += coeff * (M columns pushed through P), i.e. out += coeff * P * M.
// Used to form matrix-matrix products with Hamiltonian terms without ever
// materializing the term as a dense matrix.
inline void add_pauli_string_times(MatrixXcd& out, const MatrixXcd& m,
                                   cxd coeff, const PauliString& s,
                                   int n_sites) {
  validate_pauli_string(s, n_sites);
  const std::size_t d = dim_of(n_sites);
  if (static_cast<std::size_t>(m.rows()) != d ||
      static_cast<std::size_t>(out.rows()) != d || out.cols() != m.cols()) {
    throw std::invalid_argument("matrix dimension does not match site count");
  }
  const auto c = detail::compile_string(s, n_sites);
  for (std::size_t g = 0; g < d; ++g) {
    out.row(g ^ c.flip_mask) += (coeff * detail::string_phase(c, g)) * m.row(g);
  }
}

}  // namespace eht
