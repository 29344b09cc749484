#pragma once

#include <string>
#include <vector>

#include "rjmix/chain.hpp"
#include "rjmix/diagnostics.hpp"
#include "rjmix/model.hpp"

namespace rjmix {

// Shortest-exact decimal rendering used by every CSV artifact:
// 17 significant digits round-trip doubles bit-exactly.
std::string format_double(double v);

// Single-column CSV of decimal numbers with an optional one-line
// header (auto-detected: non-numeric first token). Parse failures
// report the 1-based line number.
Dataset read_dataset_csv(const std::string& path);
void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::string& header = "y");

// Long-format chain CSV: sweep,k,param,component,value with
// param in {w, mu, sigma2, beta, loglik}; component is 1-based and 0
// for the scalar rows. Parsed records carry no allocations.
std::string chain_to_csv(const Chain& chain);
void write_chain_csv(const std::string& path, const Chain& chain);
Chain read_chain_csv(const std::string& path);

// Two-column CSV (e.g. predictive density grids).
void write_xy_csv(const std::string& path, const std::string& header,
                  std::span<const double> x, std::span<const double> y);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace rjmix
