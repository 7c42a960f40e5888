#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qloop/api.hpp"

namespace py = pybind11;

namespace {

qloop::JobConfig make_job(double tau_re, double tau_im, double eps_eig,
                          double eps_res, int dmax, int lmax, int trunc,
                          const std::string& mode) {
    qloop::JobConfig job;
    job.modulus = qloop::ModulusConfig(qloop::Complex(tau_re, tau_im));
    job.tolerances.eps_eig = eps_eig;
    job.tolerances.eps_res = eps_res;
    job.tolerances.d_max = dmax;
    job.tolerances.l_max = lmax;
    job.tolerances.trunc = trunc;
    job.tolerances.validate();
    job.mode = mode;
    return job;
}

}  // namespace

#define QLOOP_CONFIG_ARGS                                                     \
    py::arg("tau_re") = 0.3, py::arg("tau_im") = 1.1,                         \
    py::arg("eps_eig") = 1e-8, py::arg("eps_res") = 1e-6,                     \
    py::arg("dmax") = 24, py::arg("lmax") = 16, py::arg("trunc") = 32,        \
    py::arg("mode") = "numeric"

PYBIND11_MODULE(pyqloop, m) {
    m.doc() = "canonical forms and elliptic invariants of integral q-difference "
              "systems; all functions exchange the JSON documents the CLI uses";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const qloop::Error& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    m.def(
        "classify",
        [](const std::string& loop_json, double tau_re, double tau_im,
           double eps_eig, double eps_res, int dmax, int lmax, int trunc,
           const std::string& mode) {
            return qloop::api_classify(
                loop_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("loop_json"), QLOOP_CONFIG_ARGS,
        "complete elliptic invariant of an integral loop document");

    m.def(
        "align",
        [](const std::string& loop_json, double tau_re, double tau_im,
           double eps_eig, double eps_res, int dmax, int lmax, int trunc,
           const std::string& mode) {
            return qloop::api_align(
                loop_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("loop_json"), QLOOP_CONFIG_ARGS,
        "aligned normal form and conjugator");

    m.def(
        "equiv",
        [](const std::string& a_json, const std::string& b_json, double tau_re,
           double tau_im, double eps_eig, double eps_res, int dmax, int lmax,
           int trunc, const std::string& mode) {
            return qloop::api_equiv(
                a_json, b_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("a_json"), py::arg("b_json"), QLOOP_CONFIG_ARGS,
        "equivalence test with certificate");

    m.def(
        "homdim",
        [](const std::string& a_json, const std::string& b_json, double tau_re,
           double tau_im, double eps_eig, double eps_res, int dmax, int lmax,
           int trunc, const std::string& mode) {
            return qloop::api_homdim(
                a_json, b_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("a_json"), py::arg("b_json"), QLOOP_CONFIG_ARGS,
        "measured and formula Hom dimensions");

    m.def(
        "synth",
        [](const std::string& invariant_json, double tau_re, double tau_im,
           double eps_eig, double eps_res, int dmax, int lmax, int trunc,
           const std::string& mode) {
            return qloop::api_synth(
                invariant_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("invariant_json"), QLOOP_CONFIG_ARGS,
        "canonical constant loop with the given invariant");

    m.def(
        "tensor",
        [](const std::string& a_json, const std::string& b_json, double tau_re,
           double tau_im, double eps_eig, double eps_res, int dmax, int lmax,
           int trunc, const std::string& mode) {
            return qloop::api_tensor(
                a_json, b_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("a_json"), py::arg("b_json"), QLOOP_CONFIG_ARGS);

    m.def(
        "dual",
        [](const std::string& invariant_json, double tau_re, double tau_im,
           double eps_eig, double eps_res, int dmax, int lmax, int trunc,
           const std::string& mode) {
            return qloop::api_dual(
                invariant_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("invariant_json"), QLOOP_CONFIG_ARGS);

    m.def(
        "sum",
        [](const std::string& a_json, const std::string& b_json, double tau_re,
           double tau_im, double eps_eig, double eps_res, int dmax, int lmax,
           int trunc, const std::string& mode) {
            return qloop::api_sum(
                a_json, b_json,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode));
        },
        py::arg("a_json"), py::arg("b_json"), QLOOP_CONFIG_ARGS);

    m.def(
        "selftest",
        [](uint64_t seed, int trials, double tau_re, double tau_im, double eps_eig,
           double eps_res, int dmax, int lmax, int trunc, const std::string& mode) {
            int failures = 0;
            std::string report = qloop::api_selftest(
                seed, trials,
                make_job(tau_re, tau_im, eps_eig, eps_res, dmax, lmax, trunc, mode),
                &failures);
            return py::make_tuple(report, failures);
        },
        py::arg("seed") = 1, py::arg("trials") = 20, QLOOP_CONFIG_ARGS,
        "returns (jsonl_report, failure_count)");

    m.attr("__version__") = "0.1.0";
}
