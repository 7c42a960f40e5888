#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qloop/api.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) qloop::fail("BadInput", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"canonical forms and elliptic invariants of integral q-difference systems"};
    app.require_subcommand(1);

    double tau_re = 0.3, tau_im = 1.1;
    qloop::JobConfig job;
    app.add_option("--tau-re", tau_re, "real part of tau");
    app.add_option("--tau-im", tau_im, "imaginary part of tau (> 0)");
    app.add_option("--eps-eig", job.tolerances.eps_eig, "eigenvalue/rank tolerance");
    app.add_option("--eps-res", job.tolerances.eps_res, "resonance recognition tolerance");
    app.add_option("--dmax", job.tolerances.d_max, "denominator bound for rational recognition");
    app.add_option("--lmax", job.tolerances.l_max, "power bound for q-exponents");
    app.add_option("--trunc", job.tolerances.trunc, "default truncation order");
    app.add_option("--mode", job.mode, "numeric or exact")
        ->check(CLI::IsMember({"numeric", "exact"}));

    std::string in_a, in_b, descent_path;
    uint64_t seed = 1;
    int trials = 20;

    auto* cmd_align = app.add_subcommand("align", "aligned normal form and conjugator");
    cmd_align->add_option("loop", in_a, "loop JSON file")->required();

    auto* cmd_classify = app.add_subcommand("classify", "complete elliptic invariant");
    cmd_classify->add_option("loop", in_a, "loop JSON file (numeric) or symbolic eigenvalues (exact)")->required();
    cmd_classify->add_option("--dump-descent", descent_path,
                             "also write the descent data document here");

    auto* cmd_equiv = app.add_subcommand("equiv", "equivalence test with certificate");
    cmd_equiv->add_option("a", in_a)->required();
    cmd_equiv->add_option("b", in_b)->required();

    auto* cmd_homdim = app.add_subcommand("homdim", "measured and formula Hom dimension");
    cmd_homdim->add_option("a", in_a)->required();
    cmd_homdim->add_option("b", in_b)->required();

    auto* cmd_synth = app.add_subcommand("synth", "canonical loop for an invariant");
    cmd_synth->add_option("invariant", in_a)->required();

    auto* cmd_tensor = app.add_subcommand("tensor", "tensor product of invariants");
    cmd_tensor->add_option("a", in_a)->required();
    cmd_tensor->add_option("b", in_b)->required();

    auto* cmd_dual = app.add_subcommand("dual", "dual invariant");
    cmd_dual->add_option("invariant", in_a)->required();

    auto* cmd_sum = app.add_subcommand("sum", "direct sum of invariants");
    cmd_sum->add_option("a", in_a)->required();
    cmd_sum->add_option("b", in_b)->required();

    auto* cmd_selftest = app.add_subcommand("selftest", "randomized ground-truth harness");
    cmd_selftest->add_option("--seed", seed, "base seed");
    cmd_selftest->add_option("--trials", trials, "number of trials");

    CLI11_PARSE(app, argc, argv);

    try {
        job.modulus = qloop::ModulusConfig(qloop::Complex(tau_re, tau_im));
        job.tolerances.validate();
        if (cmd_align->parsed()) {
            std::cout << qloop::api_align(read_file(in_a), job);
        } else if (cmd_classify->parsed()) {
            std::string descent_doc;
            std::cout << qloop::api_classify(read_file(in_a), job,
                                             descent_path.empty() ? nullptr
                                                                  : &descent_doc);
            if (!descent_path.empty()) {
                std::ofstream out(descent_path);
                if (!out) qloop::fail("BadInput", "cannot write " + descent_path);
                out << descent_doc;
            }
        } else if (cmd_equiv->parsed()) {
            std::cout << qloop::api_equiv(read_file(in_a), read_file(in_b), job);
        } else if (cmd_homdim->parsed()) {
            std::cout << qloop::api_homdim(read_file(in_a), read_file(in_b), job);
        } else if (cmd_synth->parsed()) {
            std::cout << qloop::api_synth(read_file(in_a), job);
        } else if (cmd_tensor->parsed()) {
            std::cout << qloop::api_tensor(read_file(in_a), read_file(in_b), job);
        } else if (cmd_dual->parsed()) {
            std::cout << qloop::api_dual(read_file(in_a), job);
        } else if (cmd_sum->parsed()) {
            std::cout << qloop::api_sum(read_file(in_a), read_file(in_b), job);
        } else if (cmd_selftest->parsed()) {
            int failures = 0;
            std::cout << qloop::api_selftest(seed, trials, job, &failures);
            if (failures > 0) {
                std::cerr << "{\"error\":\"SelftestFailed\",\"detail\":\""
                          << failures << " trial(s) failed\"}\n";
                return 3;
            }
        }
    } catch (const qloop::Error& e) {
        std::cerr << qloop::error_to_json(e);
        return e.kind() == qloop::ErrorKind::BadInput ? 2 : 3;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\":\"Internal\",\"detail\":" << nlohmann::json(std::string(e.what())).dump()
                  << "}\n";
        return 3;
    }
    return 0;
}
