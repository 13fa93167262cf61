#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "h8/error.hpp"
#include "h8/identity_report.hpp"
#include "h8/special_functions.hpp"

namespace h8 {

class NotPrimitive : public DomainError {
 public:
  using DomainError::DomainError;
};

/// Dirichlet character mod q stored as an explicit value table.
struct Character {
  std::uint32_t modulus = 1;
  std::vector<ComplexValue> values;  // values[n] = chi(n), 0 <= n < q
  int parity_delta = 0;
  std::uint32_t conductor = 1;
  bool is_principal = true;
  bool is_primitive = true;
  std::vector<std::uint32_t> exponents;  // over the unit-group generators
  std::uint32_t index = 1;               // 1-based position in canonical order

  ComplexValue operator()(std::int64_t n) const {
    const auto q = static_cast<std::int64_t>(modulus);
    return values[static_cast<std::size_t>(((n % q) + q) % q)];
  }

  /// "q.index", e.g. "5.2".
  std::string label() const;

  /// The complex-conjugate character (values conjugated, same modulus).
  Character conjugate() const;
};

/// Unit group (Z/q)^* decomposed into cyclic factors, one per odd prime
/// power and up to two for the power of 2 ({+-1} x <5>). Characters are
/// indexed by their exponent vectors in lexicographic order.
class CharacterGroup {
 public:
  explicit CharacterGroup(std::uint32_t q);

  std::uint32_t modulus() const { return q_; }
  std::uint32_t size() const { return phi_; }
  std::span<const std::uint32_t> orders() const { return orders_; }

  /// 1-based canonical index.
  Character character(std::uint32_t index) const;
  std::vector<Character> all() const;

 private:
  struct Component {
    std::uint32_t prime;
    std::uint32_t prime_power;
    std::uint32_t order;
    int kind;  // 0: odd cyclic, 1: sign of 2^k, 2: <5> in 2^k
  };

  std::uint32_t q_;
  std::uint32_t phi_;
  std::uint32_t exponent_;  // lcm of the component orders
  std::vector<Component> comps_;
  std::vector<std::uint32_t> orders_;
  std::vector<bool> unit_;
  // scaled_log_[n * comps + j] = dlog_j(n) * (exponent_ / order_j)
  std::vector<std::uint32_t> scaled_log_;
  std::vector<ComplexValue> roots_;  // exp(2 pi i k / exponent_)
};

/// All phi(q) characters mod q in canonical order. Domain 1 <= q <= 10^4.
std::vector<Character> enumerate_characters(std::uint32_t q);

/// tau(chi) = sum_{n=1}^{q} chi(n) e(n/q).
ComplexValue gauss_sum(const Character& chi);

/// exp(2 pi i k / m), exact at the quarter points.
ComplexValue unit_root(std::uint64_t k, std::uint64_t m);

struct LEvalResult {
  ComplexValue l_value;
  /// A(s, chi); empty at poles of Gamma((1-s+delta)/2) / Gamma((s+delta)/2).
  std::optional<ComplexValue> a_factor;
  /// |L(s,chi) - A(s,chi) L(1-s, conj chi)|; empty when chi is not primitive
  /// or A(s, chi) is undefined.
  std::optional<double> fe_residual;
};

/// order-th derivative (0 or 1) of L(s, chi) from Hurwitz zeta values.
ComplexValue l_function(ComplexValue s, const Character& chi, int order = 0, const EvalConfig& cfg = {});

/// Root number tau(chi) / (i^delta sqrt(q)), principal branches.
ComplexValue root_number(const Character& chi);

/// log A(s, chi); imaginary part defined modulo 2 pi.
ComplexValue log_l_chi_factor(ComplexValue s, const Character& chi);

LEvalResult l_eval(ComplexValue s, const Character& chi, const EvalConfig& cfg = {});

/// FE_L residuals |L(s,chi) - A(s,chi) L(1-s, conj chi)|. chi must be primitive.
IdentityReport l_fe_probe(const Character& chi, std::span<const ComplexValue> points,
                          const EvalConfig& cfg = {});

struct LIdentityProbe {
  IdentityReport logderiv;     // LOGDERIV_L against the finite-difference oracle
  IdentityReport closed_form;  // printed closed form against the same oracle
};

LIdentityProbe l_identity_probe(const Character& chi, std::span<const ComplexValue> points,
                                const EvalConfig& cfg = {});

}  // namespace h8
