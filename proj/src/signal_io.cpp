#include "rfsep/signal_io.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace rfsep::io {

static_assert(std::endian::native == std::endian::little, "binary formats assume a little-endian host");

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_signal_csv(const std::string& path, const CVec& x) {
    std::ofstream f(path);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f << "index,re,im\n";
    for (Eigen::Index i = 0; i < x.size(); ++i)
        f << i << ',' << fmt_double(x[i].real()) << ',' << fmt_double(x[i].imag()) << '\n';
}

CVec read_signal_csv(const std::string& path) {
    std::ifstream f(path);
    require(static_cast<bool>(f), "cannot open signal file: " + path);
    std::string line;
    std::getline(f, line);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    require(line == "index,re,im", path + ": expected header 'index,re,im'");
    std::vector<cplx> vals;
    long expect = 0;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        require(std::getline(ss, a, ',') && std::getline(ss, b, ',') && std::getline(ss, c),
                path + ": malformed row " + std::to_string(expect));
        require(std::stol(a) == expect, path + ": non-consecutive index at row " + std::to_string(expect));
        const double re = std::stod(b), im = std::stod(c);
        require(std::isfinite(re) && std::isfinite(im), path + ": non-finite sample");
        vals.emplace_back(re, im);
        ++expect;
    }
    return Eigen::Map<CVec>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

void write_signal_bin(const std::string& path, const CVec& x) {
    std::ofstream f(path, std::ios::binary);
    require(static_cast<bool>(f), "cannot open for writing: " + path);
    f.write(reinterpret_cast<const char*>(x.data()), static_cast<std::streamsize>(x.size() * sizeof(cplx)));
}

CVec read_signal_bin(const std::string& path) {
    std::ifstream f(path, std::ios::binary | std::ios::ate);
    require(static_cast<bool>(f), "cannot open signal file: " + path);
    const auto bytes = static_cast<std::size_t>(f.tellg());
    require(bytes % sizeof(cplx) == 0, path + ": size is not a multiple of 16 bytes");
    CVec x(static_cast<Eigen::Index>(bytes / sizeof(cplx)));
    f.seekg(0);
    f.read(reinterpret_cast<char*>(x.data()), static_cast<std::streamsize>(bytes));
    return x;
}

namespace {
bool ends_with(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}
}  // namespace

void write_signal(const std::string& path, const CVec& x) {
    if (ends_with(path, ".bin")) return write_signal_bin(path, x);
    write_signal_csv(path, x);
}

CVec read_signal(const std::string& path) {
    if (ends_with(path, ".bin")) return read_signal_bin(path);
    return read_signal_csv(path);
}

}  // namespace rfsep::io
