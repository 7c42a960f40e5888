#pragma once

#include <string>
#include <vector>

#include "qloop/invariant.hpp"

namespace qloop {

/// Emitters produce byte-deterministic documents: fixed key order, entries
/// sorted, floats rendered with 17 significant digits.

std::string loop_to_json(const LaurentMatrix& a, const ModulusConfig* cfg = nullptr);
LaurentMatrix loop_from_json(const std::string& text);

std::string invariant_to_json(const EllipticInvariant& inv, const ModulusConfig& cfg);
EllipticInvariant invariant_from_json(const std::string& text);

std::string descent_to_json(const DescentData& dd, const ModulusConfig& cfg);

std::string aligned_to_json(const AlignResult& ar, const ModulusConfig& cfg,
                            const ToleranceConfig& tol);

std::vector<ExactEigenvalue> exact_eigenvalues_from_json(const std::string& text);
std::string exact_resonance_to_json(const ExactResonanceData& data,
                                    const ModulusConfig& cfg);

std::string error_to_json(const Error& e);

}  // namespace qloop
