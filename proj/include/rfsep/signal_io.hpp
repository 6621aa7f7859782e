#pragma once

#include <string>

#include "rfsep/types.hpp"

namespace rfsep::io {

// CSV: header `index,re,im`, one sample per line, %.17g
void write_signal_csv(const std::string& path, const CVec& x);
CVec read_signal_csv(const std::string& path);

// binary: little-endian float64 pairs re,im with no header
void write_signal_bin(const std::string& path, const CVec& x);
CVec read_signal_bin(const std::string& path);

// picks the format from the extension (.csv or .bin)
void write_signal(const std::string& path, const CVec& x);
CVec read_signal(const std::string& path);

std::string fmt_double(double v);

}  // namespace rfsep::io
