// matrix_io.cpp — Text dump format for debugging matrices

#include "twomode/matrix_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace twomode {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_complex(Complex z) {
    std::string s = format_real(z.real());
    const std::string im = format_real(z.imag());
    if (im.front() != '-') {
        s += '+';
    }
    s += im;
    s += 'j';
    return s;
}

void write_matrix_dump(std::ostream& os, const CMatrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0) {
                os << '\t';
            }
            os << format_complex(m(r, c));
        }
        os << '\n';
    }
}

namespace {

Complex parse_complex(const std::string& tok) {
    if (tok.empty() || tok.back() != 'j') {
        throw std::invalid_argument("matrix dump: entry '" + tok + "' lacks trailing j");
    }
    const char* begin = tok.c_str();
    char* end = nullptr;
    const double re = std::strtod(begin, &end);
    if (end == begin) {
        throw std::invalid_argument("matrix dump: bad real part in '" + tok + "'");
    }
    const char* im_begin = end;
    const double im = std::strtod(im_begin, &end);
    if (end == im_begin || *end != 'j' || *(end + 1) != '\0') {
        throw std::invalid_argument("matrix dump: bad imaginary part in '" + tok + "'");
    }
    return {re, im};
}

}  // namespace

CMatrix read_matrix_dump(std::istream& is) {
    std::vector<std::vector<Complex>> rows;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<Complex> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, '\t')) {
            row.push_back(parse_complex(tok));
        }
        if (!rows.empty() && row.size() != rows.front().size()) {
            throw std::invalid_argument("matrix dump: ragged rows");
        }
        rows.push_back(std::move(row));
    }
    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = rows.empty() ? Eigen::Index{0} : static_cast<Eigen::Index>(rows.front().size());
    CMatrix m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r) {
        for (Eigen::Index c = 0; c < n_cols; ++c) {
            m(r, c) = rows[r][c];
        }
    }
    return m;
}

}  // namespace twomode
