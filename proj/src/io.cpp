#include "lrtr/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lrtr {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_tensor(const DenseTensor& t) {
    std::string out = std::to_string(t.order());
    out += '\n';
    for (index_t n = 0; n < t.order(); ++n) {
        if (n > 0) out += ' ';
        out += std::to_string(t.shape().dim(n));
    }
    out += '\n';
    for (index_t i = 0; i < t.size(); ++i) {
        out += format_double(t.vec()[i]);
        out += '\n';
    }
    return out;
}

DenseTensor parse_tensor(const std::string& text) {
    std::istringstream in(text);
    index_t order = 0;
    if (!(in >> order) || order < 1)
        throw std::invalid_argument("parse_tensor: bad order line");
    std::vector<index_t> dims(static_cast<std::size_t>(order));
    for (auto& d : dims)
        if (!(in >> d) || d < 1) throw std::invalid_argument("parse_tensor: bad dimension line");
    const Shape shape(std::move(dims));
    Vector data(shape.num_elements());
    for (index_t i = 0; i < data.size(); ++i)
        if (!(in >> data[i]))
            throw std::invalid_argument("parse_tensor: expected " +
                                     std::to_string(shape.num_elements()) + " values");
    double extra;
    if (in >> extra) throw std::invalid_argument("parse_tensor: trailing values");
    return DenseTensor(shape, std::move(data));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
    if (!out) throw std::invalid_argument("write failed: " + path);
}

void write_tensor_file(const std::string& path, const DenseTensor& t) {
    write_text_file(path, format_tensor(t));
}

DenseTensor read_tensor_file(const std::string& path) {
    return parse_tensor(read_text_file(path));
}

namespace {

// linear index (canonical order) -> 1-based multi-index
std::vector<index_t> to_multi_index(index_t linear, const Shape& shape) {
    std::vector<index_t> idx(static_cast<std::size_t>(shape.order()));
    for (index_t n = 0; n < shape.order(); ++n) {
        idx[static_cast<std::size_t>(n)] = linear % shape.dim(n) + 1;
        linear /= shape.dim(n);
    }
    return idx;
}

}  // namespace

std::string format_mask(const SensingOperator& op) {
    const auto& omega = op.omega();
    std::string out = std::to_string(omega.size());
    out += '\n';
    for (index_t linear : omega) {
        const auto idx = to_multi_index(linear, op.domain());
        for (std::size_t k = 0; k < idx.size(); ++k) {
            if (k > 0) out += ' ';
            out += std::to_string(idx[k]);
        }
        out += '\n';
    }
    return out;
}

SensingOperator parse_mask(const std::string& text, const Shape& shape) {
    std::istringstream in(text);
    index_t count = 0;
    if (!(in >> count) || count < 0) throw std::invalid_argument("parse_mask: bad count line");
    std::vector<index_t> omega;
    omega.reserve(static_cast<std::size_t>(count));
    for (index_t i = 0; i < count; ++i) {
        index_t linear = 0;
        index_t stride = 1;
        for (index_t n = 0; n < shape.order(); ++n) {
            index_t component;
            if (!(in >> component) || component < 1 || component > shape.dim(n))
                throw std::invalid_argument("parse_mask: bad index on entry " + std::to_string(i + 1));
            linear += (component - 1) * stride;
            stride *= shape.dim(n);
        }
        omega.push_back(linear);
    }
    return SensingOperator::mask(shape, std::move(omega));
}

void write_mask_file(const std::string& path, const SensingOperator& op) {
    write_text_file(path, format_mask(op));
}

SensingOperator read_mask_file(const std::string& path, const Shape& shape) {
    return parse_mask(read_text_file(path), shape);
}

std::string serialize_certificate(const CertificateReport& rep) {
    std::string out;
    out += "kind=";
    out += to_string(rep.kind);
    out += "\nestimate=" + format_double(rep.estimate);
    out += "\nsamples=" + std::to_string(rep.samples_used);
    out += "\nverdict=";
    out += to_string(rep.verdict);
    out += "\nseed=" + std::to_string(rep.seed);
    if (rep.witness) out += "\nwitness_norm=" + format_double(frobenius_norm(*rep.witness));
    if (rep.ssp_delta_hat) out += "\ndelta_hat=" + format_double(*rep.ssp_delta_hat);
    out += '\n';
    return out;
}

}  // namespace lrtr
