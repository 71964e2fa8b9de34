#include "stingray/report.hpp"

#include <sstream>

namespace stingray {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Json basis_json(const Subspace& U) { return matrix_json(U.basis()); }

}  // namespace

Json envelope(const std::string& command) {
    Json j;
    j["schema"] = kSchema;
    j["command"] = command;
    return j;
}

Json rat_json(const Rat& x) { return to_string(x); }

std::string decimal_string(const Rat& x_in, unsigned digits) {
    Rat x = x_in;
    x.canonicalize();
    bool neg = x < 0;
    if (neg) x = -x;
    BigInt scale = pow_big(10, digits);
    Rat y = x * Rat(scale) + Rat(1, 2);
    BigInt n = y.get_num() / y.get_den();
    std::string s = n.get_str();
    if (s.size() <= digits) s = std::string(digits + 1 - s.size(), '0') + s;
    std::string out = s.substr(0, s.size() - digits);
    if (digits) out += "." + s.substr(s.size() - digits);
    return (neg && n != 0 ? "-" : "") + out;
}

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (size_t i = 0; i < m.rows(); ++i) {
        Json r = Json::array();
        for (size_t j = 0; j < m.cols(); ++j) r.push_back(m(i, j));
        rows.push_back(r);
    }
    return rows;
}

Json certificate_json(const StingrayCertificate& c) {
    Json j;
    j["e"] = c.e;
    j["r"] = to_string(c.r);
    j["order"] = to_string(c.order);
    j["U_basis"] = basis_json(c.U);
    j["F_basis"] = basis_json(c.F);
    j["element"] = matrix_json(c.element);
    return j;
}

Json verdict_json(const Verdict& v) {
    Json j;
    j["verdict"] = v.name();
    j["generating"] = v.generating();
    j["order"] = to_string(v.order);
    j["target_order"] = to_string(v.target_order);
    j["order_certified"] = v.order_certified;
    j["irreducible"] = v.irreducible;
    j["note"] = v.note;
    return j;
}

Json duo_json(const DuoReport& D) {
    Json j;
    j["d"] = D.d;
    j["target"] = D.target.name();
    j["e1"] = D.cert1.e;
    j["e2"] = D.cert2.e;
    j["Vd_basis"] = basis_json(D.Vd);
    j["g1"] = certificate_json(D.cert1);
    j["g2"] = certificate_json(D.cert2);
    return j;
}

Json estimate_json(const MCEstimate& m) {
    Json j;
    j["successes"] = m.successes;
    j["trials"] = m.trials;
    j["point"] = m.point;
    j["se"] = m.standard_error();
    j["wilson95"] = {m.wilson.first, m.wilson.second};
    j["master_seed"] = m.master_seed;
    Json meta = Json::object();
    for (auto& [k, v] : m.metadata) meta[k] = v;
    j["metadata"] = meta;
    return j;
}

Json count_json(const CountReport& c) {
    Json j;
    j["formula"] = c.formula;
    Json p = Json::object();
    for (auto& [k, v] : c.params) p[k] = v;
    j["params"] = p;
    if (c.exact) j["exact"] = rat_json(*c.exact);
    if (c.bounds) j["bounds"] = {rat_json(c.bounds->first), rat_json(c.bounds->second)};
    Json x = Json::object();
    for (auto& [k, v] : c.extra) x[k] = rat_json(v);
    if (!c.extra.empty()) j["extra"] = x;
    return j;
}

Json oracle_json(const OracleResult& r) {
    Json j;
    j["formula"] = r.formula;
    Json p = Json::object();
    for (auto& [k, v] : r.params) p[k] = v;
    j["params"] = p;
    j["value"] = to_string(r.value);
    if (r.ratio) j["ratio"] = rat_json(*r.ratio);
    j["enumerated"] = to_string(r.enumerated);
    j["expected_universe"] = to_string(r.expected_universe);
    j["method"] = r.method;
    Json x = Json::object();
    for (auto& [k, v] : r.extra) x[k] = v;
    j["extra"] = x;
    return j;
}

Json grid_row_json(const GridRow& g) {
    Json j;
    j["quantity"] = g.quantity;
    j["X"] = type_name(g.type);
    j["d"] = g.d;
    j["q"] = g.q;
    j["e"] = g.e;
    j["formula"] = g.formula_value;
    j["oracle"] = g.oracle_value;
    j["method"] = g.method;
    j["ok"] = g.ok;
    return j;
}

Json rho_json(const RhoGenReport& r) {
    Json j;
    j["X"] = type_name(r.X);
    j["d"] = r.d;
    j["q"] = r.q;
    j["e1"] = r.e1;
    j["e2"] = r.e2;
    j["trials_requested"] = r.requested;
    j["accepted_duos"] = r.estimate.trials;
    j["rho_hat"] = r.estimate.point;
    j["se"] = r.estimate.standard_error();
    j["wilson95"] = {r.estimate.wilson.first, r.estimate.wilson.second};
    j["estimate"] = estimate_json(r.estimate);
    j["attempts"] = r.attempts;
    j["rejected_pairs"] = r.rejected;
    j["unverified"] = r.unverified;
    Json bv = Json::object();
    for (auto& [k, v] : r.by_verdict) bv[k] = v;
    j["by_verdict"] = bv;
    if (r.bound) {
        j["bound"] = rat_json(*r.bound);
        j["bound_decimal"] = decimal_string(*r.bound);
    }
    j["pass"] = r.pass;
    j["irreducible"] = estimate_json(r.irreducible);
    if (r.irreducible_bound) {
        j["irreducible_bound"] = rat_json(*r.irreducible_bound);
        j["irreducible_bound_decimal"] = decimal_string(*r.irreducible_bound);
        j["irreducible_floor"] = kIrreducibleFloor;
        j["irreducible_pass"] = r.irreducible_pass;
    }
    // non-generation events with their witnesses
    Json ev = Json::array();
    for (auto& t : r.trials) {
        if (!t.accepted || t.tag == VerdictTag::ContainsOmega || t.tag == VerdictTag::OrthogonalInSp) continue;
        Json e;
        e["trial"] = t.index;
        e["verdict"] = t.verdict;
        e["order"] = to_string(t.order);
        e["irreducible"] = t.irreducible;
        e["note"] = t.note;
        ev.push_back(e);
    }
    j["non_generating"] = ev;
    return j;
}

Json embed_json(const EmbedResult& r) {
    Json j;
    j["X"] = type_name(r.X);
    j["n"] = r.n;
    j["q"] = r.q;
    j["success"] = r.success;
    j["samples"] = r.samples;
    j["certificates"] = r.certificates;
    j["pairs_tried"] = r.pairs_tried;
    j["window"] = {{"alpha", r.window.alpha}, {"n0", r.window.n0}, {"lo", r.window.lo}, {"hi", r.window.hi},
                   {"e_lo", r.window.e_lo}, {"e_hi", r.window.e_hi}};
    j["d"] = r.d;
    j["target"] = r.target;
    j["fixed_dim"] = r.fixed_dim;
    j["verdict"] = verdict_json(r.verdict);
    if (r.duo) j["duo"] = duo_json(*r.duo);
    return j;
}

Json cycle_json(const CycleCert& c) {
    Json j;
    j["p"] = c.p;
    j["power"] = to_string(c.power);
    j["support"] = c.support;
    return j;
}

Json alt_verdict_json(const AltVerdict& v) {
    Json j;
    j["verdict"] = v.name();
    j["k"] = v.k;
    j["order"] = to_string(v.order);
    j["embedding_hypotheses"] = v.embedding_hypotheses;
    return j;
}

Json alt_embed_json(const AltEmbedResult& r) {
    Json j;
    j["success"] = r.success;
    j["stage"] = r.stage;
    j["samples"] = r.samples;
    j["conjugations"] = r.conjugations;
    j["prime_window"] = {r.lo, r.hi};
    if (r.g) j["g"] = cycle_json(*r.g);
    if (r.h) j["h"] = cycle_json(*r.h);
    if (r.gx) j["g_conjugate"] = cycle_json(*r.gx);
    if (r.g && r.h) j["verdict"] = alt_verdict_json(r.verdict);
    return j;
}

std::string rho_trials_csv(const RhoGenReport& r) {
    std::ostringstream os;
    os << "trial,attempts,accepted,verdict,generating,order,irreducible,note\n";
    for (auto& t : r.trials) {
        bool g = t.tag == VerdictTag::ContainsOmega || t.tag == VerdictTag::OrthogonalInSp;
        os << t.index << "," << t.attempts << "," << (t.accepted ? 1 : 0) << "," << csv_field(t.verdict) << ","
           << (t.accepted && g ? 1 : 0) << "," << t.order.get_str() << "," << (t.irreducible ? 1 : 0) << ","
           << csv_field(t.note) << "\n";
    }
    return os.str();
}

}  // namespace stingray
