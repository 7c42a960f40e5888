#include "qloop/serialization.hpp"

#include <cstdio>

#include "qloop/json_out.hpp"

namespace qloop {

namespace {

using ojson = nlohmann::ordered_json;

void dump_impl(const ojson& j, std::string& out) {
    switch (j.type()) {
        case nlohmann::detail::value_t::object: {
            out += '{';
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ',';
                first = false;
                out += nlohmann::json(it.key()).dump();
                out += ':';
                dump_impl(it.value(), out);
            }
            out += '}';
            break;
        }
        case nlohmann::detail::value_t::array: {
            out += '[';
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ',';
                first = false;
                dump_impl(v, out);
            }
            out += ']';
            break;
        }
        case nlohmann::detail::value_t::number_float:
            out += format_double17(j.get<double>());
            break;
        default:
            out += j.dump();
            break;
    }
}

std::string dump(const ojson& j) { return dump_deterministic(j); }

ojson tau_field(const ModulusConfig& cfg) {
    return ojson::array({cfg.tau.real(), cfg.tau.imag()});
}

ojson matrix_to_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (int i = 0; i < m.rows(); ++i) {
        ojson row = ojson::array();
        for (int j = 0; j < m.cols(); ++j)
            row.push_back(ojson::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

double finite_number(const nlohmann::json& j, const char* what) {
    if (!j.is_number()) fail("BadDocument", std::string(what) + " must be a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) fail("BadDocument", std::string(what) + " must be finite");
    return v;
}

Complex complex_from_json(const nlohmann::json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        fail("BadDocument", std::string(what) + " must be [re, im]");
    return Complex(finite_number(j[0], what), finite_number(j[1], what));
}

Matrix matrix_from_json(const nlohmann::json& j, int rows, int cols, const char* what) {
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        fail("BadDocument", std::string(what) + ": wrong row count");
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (!j[i].is_array() || static_cast<int>(j[i].size()) != cols)
            fail("BadDocument", std::string(what) + ": wrong column count");
        for (int c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c], what);
    }
    return m;
}

ojson loop_body(const LaurentMatrix& a) {
    ojson doc;
    doc["n"] = a.size();
    doc["m_cov"] = a.covering();
    doc["window"] = ojson::array({a.window().lo, a.window().hi});
    ojson terms = ojson::array();
    for (const auto& [k, m] : a.terms()) {
        ojson t;
        t["k"] = k;
        t["matrix"] = matrix_to_json(m);
        terms.push_back(std::move(t));
    }
    doc["terms"] = std::move(terms);
    return doc;
}

LaurentMatrix loop_from_body(const nlohmann::json& doc) {
    if (!doc.is_object()) fail("BadDocument", "loop document must be an object");
    for (const char* key : {"n", "m_cov", "window", "terms"})
        if (!doc.contains(key))
            fail("BadDocument", std::string("loop document lacks \"") + key + "\"");
    int n = doc["n"].get<int>();
    int m_cov = doc["m_cov"].get<int>();
    if (n < 1) fail("BadDocument", "n must be >= 1");
    if (m_cov < 1) fail("BadDocument", "m_cov must be >= 1");
    const auto& wj = doc["window"];
    if (!wj.is_array() || wj.size() != 2)
        fail("BadDocument", "window must be [lo, hi]");
    Window w{wj[0].get<int>(), wj[1].get<int>()};
    if (w.hi >= kExactWindow) w.hi = kExactWindow;
    if (w.lo > w.hi) fail("BadDocument", "window lower bound exceeds upper bound");
    LaurentMatrix a(n, n, m_cov, w);
    for (const auto& t : doc["terms"]) {
        if (!t.contains("k") || !t.contains("matrix"))
            fail("BadDocument", "term lacks \"k\" or \"matrix\"");
        int k = t["k"].get<int>();
        if (!w.contains(k)) fail("BadDocument", "term exponent outside window");
        a.set_coeff(k, matrix_from_json(t["matrix"], n, n, "term matrix"));
    }
    return a;
}

ojson point_to_json(const EPoint& p) {
    ojson j;
    j["t_tau"] = p.t_tau;
    j["t_one"] = p.t_one;
    return j;
}

Rational rational_from_string(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) fail("BadDocument", "rational with zero denominator");
        return Rational(num, den);
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        fail("BadDocument", "cannot parse rational \"" + s + "\"");
    }
}

std::string rational_to_string(const Rational& r) {
    std::string num = boost::multiprecision::numerator(r).str();
    std::string den = boost::multiprecision::denominator(r).str();
    return den == "1" ? num : num + "/" + den;
}

}  // namespace

std::string format_double17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string dump_deterministic(const nlohmann::ordered_json& j) {
    std::string out;
    dump_impl(j, out);
    out += '\n';
    return out;
}

std::string loop_to_json(const LaurentMatrix& a, const ModulusConfig* cfg) {
    ojson doc;
    if (cfg) doc["tau"] = tau_field(*cfg);
    ojson body = loop_body(a);
    for (auto it = body.begin(); it != body.end(); ++it) doc[it.key()] = it.value();
    return dump(doc);
}

LaurentMatrix loop_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("BadDocument", "input is not valid JSON");
    return loop_from_body(doc);
}

std::string invariant_to_json(const EllipticInvariant& inv, const ModulusConfig& cfg) {
    EllipticInvariant sorted = inv;
    sorted.sort_entries();
    ojson doc;
    doc["tau"] = tau_field(cfg);
    doc["rank"] = sorted.rank();
    ojson entries = ojson::array();
    for (const auto& e : sorted.entries) {
        ojson entry;
        entry["t_tau"] = e.point.t_tau;
        entry["t_one"] = e.point.t_one;
        entry["size"] = e.size;
        entries.push_back(std::move(entry));
    }
    doc["entries"] = std::move(entries);
    doc["det_point"] = point_to_json(determinant_point(sorted));
    return dump(doc);
}

EllipticInvariant invariant_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("BadDocument", "input is not valid JSON");
    if (!doc.is_object() || !doc.contains("entries"))
        fail("BadDocument", "invariant document lacks \"entries\"");
    EllipticInvariant inv;
    for (const auto& e : doc["entries"]) {
        InvariantEntry entry;
        entry.point.t_tau = finite_number(e.at("t_tau"), "t_tau");
        entry.point.t_one = finite_number(e.at("t_one"), "t_one");
        entry.size = e.at("size").get<int>();
        if (entry.size < 1) fail("BadDocument", "entry size must be >= 1");
        inv.entries.push_back(entry);
    }
    if (doc.contains("rank") && doc["rank"].get<int>() != inv.rank())
        fail("BadDocument", "rank does not match the sum of entry sizes");
    inv.sort_entries();
    return inv;
}

std::string descent_to_json(const DescentData& dd, const ModulusConfig& cfg) {
    ojson doc;
    doc["tau"] = tau_field(cfg);
    doc["m"] = dd.m;
    doc["phi"] = dd.phi;
    doc["basis"] = matrix_to_json(dd.basis);
    doc["c"] = matrix_to_json(dd.c);
    doc["theta_a"] = matrix_to_json(dd.theta_a);
    return dump(doc);
}

std::string aligned_to_json(const AlignResult& ar, const ModulusConfig& cfg,
                            const ToleranceConfig& tol) {
    ojson doc;
    doc["tau"] = tau_field(cfg);
    doc["a0"] = matrix_to_json(ar.form.a0);
    ojson xs = ojson::array();
    for (const auto& x : ar.form.xs) xs.push_back(matrix_to_json(x));
    doc["xs"] = std::move(xs);
    doc["K"] = ar.form.K;
    doc["aligned_polynomial"] = loop_body(expand_aligned(ar.form, cfg, tol));
    doc["conjugator"] = loop_body(ar.conjugator);
    return dump(doc);
}

std::vector<ExactEigenvalue> exact_eigenvalues_from_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail("BadDocument", "input is not valid JSON");
    const nlohmann::json* list = &doc;
    if (doc.is_object() && doc.contains("eigenvalues")) list = &doc["eigenvalues"];
    if (!list->is_array())
        fail("BadDocument", "exact mode expects a list of eigenvalue objects");
    std::vector<ExactEigenvalue> out;
    for (const auto& e : *list) {
        ExactEigenvalue ee;
        ee.r = e.contains("r") ? rational_from_string(e["r"].get<std::string>())
                               : Rational(0);
        ee.r1 = e.contains("r1") ? rational_from_string(e["r1"].get<std::string>())
                                 : Rational(0);
        if (e.contains("tag") && !e["tag"].is_null())
            ee.tag = e["tag"].get<std::string>();
        out.push_back(std::move(ee));
    }
    if (out.empty()) fail("BadDocument", "exact mode needs at least one eigenvalue");
    return out;
}

std::string exact_resonance_to_json(const ExactResonanceData& data,
                                    const ModulusConfig& cfg) {
    ojson doc;
    doc["tau"] = tau_field(cfg);
    doc["mode"] = "exact";
    doc["m"] = data.m;
    doc["phi"] = data.phi;
    ojson sred = ojson::array();
    for (const auto& e : data.s_red) {
        ojson item;
        item["r"] = rational_to_string(e.r);
        item["r1"] = rational_to_string(e.r1);
        if (e.tag)
            item["tag"] = *e.tag;
        else
            item["tag"] = nullptr;
        sred.push_back(std::move(item));
    }
    doc["s_red"] = std::move(sred);
    doc["relation_matrix"] = data.relation_matrix;
    auto basis_to_json = [](const std::vector<std::vector<Int>>& basis) {
        ojson rows = ojson::array();
        for (const auto& v : basis) {
            ojson row = ojson::array();
            for (const auto& x : v) row.push_back(static_cast<long long>(x));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    doc["L_basis"] = basis_to_json(data.split.L_basis);
    doc["complement_basis"] = basis_to_json(data.split.complement_basis);
    return dump(doc);
}

std::string error_to_json(const Error& e) {
    ojson doc;
    doc["error"] = e.code();
    doc["detail"] = e.detail();
    return dump(doc);
}

}  // namespace qloop
