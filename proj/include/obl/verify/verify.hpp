#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "obl/cas/rational_function.hpp"

// Exact identities behind the quadrilateral EDS computation. Every check
// works over Q(D1, D2, S[, u]) with D3 = 2S - D1, D4 = 2S - D2 substituted;
// partial derivatives in D1, D2 hold S fixed.

namespace obl::verify {

using cas::Polynomial;
using cas::Rational;
using cas::RationalFunction;

class VerifyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FactorizationResult {
    bool ok = false;
    /// (D2 D4 - D1 D3) - (D1 - D2)(D2 - D3), normalized; zero when ok.
    RationalFunction difference;
    /// Spot value of D at (D1, D2, S) = (2, 5, 4).
    Rational spot;
    /// The identity fails with D1..D4 independent.
    bool needs_substitution = false;
};

FactorizationResult verify_D_factorization();

/// Coefficients of (8S/(1-u)) du = (a1 u + b1) dD1 + (a2 u + b2) dD2.
struct DuCoefficients {
    cas::Context ctx;
    RationalFunction a1, a2, b1, b2;
};

/// Variables D1, D2, S, u (u unused by the coefficients themselves).
DuCoefficients build_ab();

enum class Convention { printed_signs, rederived_signs };
const char* to_string(Convention c);

struct CompatibilityReport {
    Convention convention = Convention::printed_signs;
    /// u (d2 a1 - d1 a2 + s1 K) + d2 b1 - d1 b2 + s2 K with K = (a2 b1 - a1 b2) / 8S.
    RationalFunction E;
    bool u_minus_1_divides = false;
    /// E D1 D2 D3 D4 D / (S (u - 1)), when that is a polynomial.
    std::optional<Polynomial> cleared;
    bool match = false;
};

CompatibilityReport compatibility_polynomial(Convention c);

/// The printed 12-term polynomial in D1, D2, S (over the DuCoefficients variables).
Polynomial printed_polynomial(const cas::Context& ctx);

/// Tries both conventions; throws VerifyError when neither reproduces the
/// printed polynomial.
CompatibilityReport matching_compatibility();

struct ThreePeriodResult {
    RationalFunction a, b;
    RationalFunction determinant;
    /// Coefficient of omega^1 ^ omega^2 in d(omega^1 + omega^2 + omega^3).
    RationalFunction obstruction;
    bool ok = false;
};

ThreePeriodResult three_period_check();

struct DegenerateBranch {
    std::string name;
    bool ok = false;
    std::string detail;
};

std::vector<DegenerateBranch> degenerate_case_check();

struct InversionResult {
    bool product_identity = false;
    bool reverse_identity = false;
    bool determinants_reciprocal = false;
    bool spot_identity = false;
    RationalFunction det_del_om, det_om_delta;
    bool ok() const { return product_identity && reverse_identity && determinants_reciprocal && spot_identity; }
};

InversionResult invert_delta_forms();

struct CheckEntry {
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    std::string json;  // check-specific fields, a JSON object
};

struct VerifyReport {
    std::vector<CheckEntry> checks;
    bool all_pass() const;
    std::string to_json() const;
};

/// suite: "all" or one of factorization, ab, compatibility, three-period,
/// degenerate, inversion. Throws std::invalid_argument on unknown names.
VerifyReport run_suite(const std::string& suite);

}  // namespace obl::verify
