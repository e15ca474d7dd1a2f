#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "qnet/op.hpp"

// Deterministic JSON emission helpers. Keys are written in sorted order by
// the callers and every float uses fixed 17-significant-digit scientific
// notation, so identical inputs serialize to identical bytes.

namespace qnet::detail {

inline std::string fmt_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("cannot serialize a non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", x);
  return buf;
}

inline void write_json_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      case '\r': os << "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          os << buf;
        } else {
          os << c;
        }
    }
  }
  os << '"';
}

inline void write_complex(std::ostream& os, Complex z) {
  os << '[' << fmt_double(z.real()) << ',' << fmt_double(z.imag()) << ']';
}

inline void write_matrix(std::ostream& os, const Op& m) {
  os << '[';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (i) os << ',';
    os << '[';
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) os << ',';
      write_complex(os, m(i, j));
    }
    os << ']';
  }
  os << ']';
}

}  // namespace qnet::detail
