#pragma once

#include "lrtr/guarantees.hpp"
#include "lrtr/operators.hpp"

#include <string>

namespace lrtr {

/// Tensor text format: line 1 is the order N, line 2 the dimensions
/// I_1 ... I_N, then all prod(I) values in canonical element order,
/// whitespace-separated. Values are printed with 17 significant digits so
/// the round-trip is bit-exact.
std::string format_tensor(const DenseTensor& t);
DenseTensor parse_tensor(const std::string& text);

void write_tensor_file(const std::string& path, const DenseTensor& t);
DenseTensor read_tensor_file(const std::string& path);

/// Mask file format: line 1 is |Omega|, then one 1-based multi-index per
/// line, space-separated, in the operator's canonical (sorted) order.
std::string format_mask(const SensingOperator& op);
SensingOperator parse_mask(const std::string& text, const Shape& shape);

void write_mask_file(const std::string& path, const SensingOperator& op);
SensingOperator read_mask_file(const std::string& path, const Shape& shape);

/// Flat key=value block: kind, estimate, samples, verdict, seed, plus
/// witness_norm / delta_hat when present.
std::string serialize_certificate(const CertificateReport& rep);

/// Shortest decimal that round-trips a double (%.17g).
std::string format_double(double v);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lrtr
