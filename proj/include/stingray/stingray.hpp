#pragma once

#include <optional>
#include <vector>

#include "stingray/classical.hpp"

namespace stingray {

// g acts irreducibly on the e-dimensional moved space U, trivially on the
// fixed space F, V = U + F, and r (a ppd of q^{ue}-1) divides |g|
struct StingrayCertificate {
    Matrix element;
    unsigned e = 0;
    BigInt r;
    BigInt order;
    Subspace U, F;
    Poly factor;  // charpoly of g on U
};

std::optional<StingrayCertificate> classify_stingray(const Matrix& g, const ClassicalGroup& G);

// look for a power of g that is an e-ppd stingray element with e in [e_lo, e_hi];
// the first e (ascending) that works wins
std::optional<StingrayCertificate> stingray_scan(const Matrix& g, const ClassicalGroup& G, unsigned e_lo, unsigned e_hi);
// every e in the window that yields a certificate
std::vector<StingrayCertificate> stingray_scan_all(const Matrix& g, const ClassicalGroup& G, unsigned e_lo, unsigned e_hi);

// m-th power (m = q-1, q+1, 1, 2 for L, U, Sp, O) reduced to order r
StingrayCertificate power_to_omega(const StingrayCertificate& c, const ClassicalGroup& G);
unsigned omega_power(const ClassicalGroup& G);

// conjugate by x: the certificate of x^-1 g x
StingrayCertificate conjugate_certificate(const StingrayCertificate& c, const Matrix& x, const Matrix& xinv);

// target of the duo: a group type, or O+/- still to be decided (Sp, q even)
struct Target {
    GroupType type = GroupType::L;
    bool orthogonal_unresolved = false;
    std::string name() const { return orthogonal_unresolved ? std::string("O+-") : type_name(type); }
};

struct DuoReport {
    StingrayCertificate cert1, cert2;  // e1 >= e2
    size_t d = 0;
    Subspace Vd;
    Matrix r1, r2;  // restrictions to Vd in the basis rows of Vd
    Form form;      // form restricted to Vd
    Target target;
};

std::optional<DuoReport> form_duo(const StingrayCertificate& c1, const StingrayCertificate& c2, const ClassicalGroup& G);

}  // namespace stingray
