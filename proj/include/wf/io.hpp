#pragma once

#include <string>
#include <vector>

#include "wf/ensemble.hpp"
#include "wf/types.hpp"

namespace wf {

/// Ensemble text format: header line "N M", then M lines of 2N decimal floats
/// (re a_m1, im a_m1, ..., re a_mN, im a_mN). Signals use header "N 1".
SamplingEnsemble parse_ensemble(const std::string& path);
CVector parse_signal(const std::string& path);
void write_ensemble(const SamplingEnsemble& ensemble, const std::string& path);
void write_signal(const CVector& signal, const std::string& path);

/// 12-significant-digit float formatting used by every CSV surface.
std::string format_sig12(double value);

/// Writes a CSV with a byte-exact header and preformatted rows.
void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::string>& rows);

}  // namespace wf
