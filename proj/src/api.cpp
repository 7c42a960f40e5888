#include "qloop/api.hpp"

#include "qloop/intertwiner.hpp"
#include "qloop/json_out.hpp"
#include "qloop/testkit.hpp"

namespace qloop {

namespace {

using ojson = nlohmann::ordered_json;

ojson tau_field(const ModulusConfig& cfg) {
    return ojson::array({cfg.tau.real(), cfg.tau.imag()});
}

}  // namespace

std::string api_classify(const std::string& input_json, const JobConfig& job,
                         std::string* descent_json) {
    job.modulus.validate();
    job.tolerances.validate();
    if (job.mode == "exact") {
        auto eigs = exact_eigenvalues_from_json(input_json);
        ExactResonanceData data = exact_resonance_analyze(eigs);
        return exact_resonance_to_json(data, job.modulus);
    }
    LaurentMatrix a = loop_from_json(input_json);
    AlignResult ar = align(a, job.modulus, job.tolerances);
    ResonanceData rd = resonance_analyze(ar.form.jordan.eigenvalues_by_column(),
                                         job.modulus, job.tolerances);
    DescentData dd = descend(ar.form, rd, job.modulus, job.tolerances);
    if (descent_json) *descent_json = descent_to_json(dd, job.modulus);
    EllipticInvariant inv = atiyah_data(dd, job.modulus, job.tolerances);
    return invariant_to_json(inv, job.modulus);
}

std::string api_align(const std::string& loop_json, const JobConfig& job) {
    LaurentMatrix a = loop_from_json(loop_json);
    AlignResult ar = align(a, job.modulus, job.tolerances);
    return aligned_to_json(ar, job.modulus, job.tolerances);
}

std::string api_equiv(const std::string& a_json, const std::string& b_json,
                      const JobConfig& job) {
    LaurentMatrix a = loop_from_json(a_json);
    LaurentMatrix b = loop_from_json(b_json);
    EllipticInvariant ia = classify(a, job.modulus, job.tolerances);
    EllipticInvariant ib = classify(b, job.modulus, job.tolerances);
    bool eq = invariants_equal(ia, ib, job.tolerances.eps_res);

    ojson doc;
    doc["tau"] = tau_field(job.modulus);
    doc["equivalent"] = eq;
    doc["invariant_a"] = nlohmann::ordered_json::parse(
        invariant_to_json(ia, job.modulus));
    doc["invariant_b"] = nlohmann::ordered_json::parse(
        invariant_to_json(ib, job.modulus));
    doc["certificate"] = nullptr;
    if (eq && a.size() == b.size()) {
        try {
            auto cert = certificate_conjugator(a, b, job.modulus, job.tolerances);
            if (cert)
                doc["certificate"] =
                    ojson::parse(loop_to_json(*cert, &job.modulus));
        } catch (const Error&) {
            // non-polynomial inputs: the oracle does not apply, certificate stays null
        }
    }
    return dump_deterministic(doc);
}

std::string api_homdim(const std::string& a_json, const std::string& b_json,
                       const JobConfig& job) {
    LaurentMatrix a = loop_from_json(a_json);
    LaurentMatrix b = loop_from_json(b_json);
    int measured = hom_dimension_measured(a, b, job.modulus, job.tolerances);
    int formula = hom_dimension_formula(classify(a, job.modulus, job.tolerances),
                                        classify(b, job.modulus, job.tolerances),
                                        job.tolerances);
    ojson doc;
    doc["tau"] = tau_field(job.modulus);
    doc["measured"] = measured;
    doc["formula"] = formula;
    return dump_deterministic(doc);
}

std::string api_synth(const std::string& invariant_json, const JobConfig& job) {
    EllipticInvariant inv = invariant_from_json(invariant_json);
    LaurentMatrix a = synthesize(inv, job.modulus);
    return loop_to_json(a, &job.modulus);
}

std::string api_tensor(const std::string& a_json, const std::string& b_json,
                       const JobConfig& job) {
    EllipticInvariant t = tensor_data(invariant_from_json(a_json),
                                      invariant_from_json(b_json));
    return invariant_to_json(t, job.modulus);
}

std::string api_dual(const std::string& invariant_json, const JobConfig& job) {
    return invariant_to_json(dual_data(invariant_from_json(invariant_json)),
                             job.modulus);
}

std::string api_sum(const std::string& a_json, const std::string& b_json,
                    const JobConfig& job) {
    EllipticInvariant s = sum_data(invariant_from_json(a_json),
                                   invariant_from_json(b_json));
    return invariant_to_json(s, job.modulus);
}

std::string api_selftest(uint64_t seed, int trials, const JobConfig& job,
                         int* failures) {
    SelftestReport rep = run_selftest(seed, trials, job.modulus, job.tolerances);
    if (failures) *failures = rep.failures;
    return rep.jsonl;
}

}  // namespace qloop
