#pragma once

// On-disk formats.
//
//   PGM   8-bit binary graymap, clamp(round(255 * v), 0, 255); viewing only.
//   FPR1  "FPR1", n (u64 LE), n*n f64 LE row-major samples.
//   FPM1  "FPM1", n (u64 LE), n*n bytes in {0, 1}, row-major.
//   FPO1  "FPO1", n (u64 LE), n*n mask bytes, then (re, im) f64 LE pairs for
//         every masked entry in row-major order.
//
// Every writer goes through a temporary file and a rename.

#include "altproj/fourier.hpp"
#include "altproj/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace altproj::io {

class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void put_u64(std::string& out, std::uint64_t v)
{
    for (int b = 0; b < 8; ++b)
        out.push_back(static_cast<char>((v >> (8 * b)) & 0xffu));
}

inline void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    Reader(std::string_view data, std::string_view what) : data_(data), what_(what) {}

    void expect_magic(std::string_view magic)
    {
        if (data_.substr(0, magic.size()) != magic)
            throw FormatError(std::string(what_) + ": bad magic, expected " + std::string(magic));
        pos_ = magic.size();
    }

    std::uint64_t u64()
    {
        need(8);
        std::uint64_t v = 0;
        for (int b = 0; b < 8; ++b)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + b])) << (8 * b);
        pos_ += 8;
        return v;
    }

    double f64() { return std::bit_cast<double>(u64()); }

    unsigned char byte()
    {
        need(1);
        return static_cast<unsigned char>(data_[pos_++]);
    }

    void expect_end() const
    {
        if (pos_ != data_.size())
            throw FormatError(std::string(what_) + ": trailing bytes");
    }

private:
    void need(std::size_t count) const
    {
        if (pos_ + count > data_.size())
            throw FormatError(std::string(what_) + ": truncated");
    }

    std::string_view data_;
    std::string_view what_;
    std::size_t pos_ = 0;
};

inline std::size_t read_side(Reader& r, std::string_view what)
{
    const std::uint64_t n = r.u64();
    if (n == 0 || n > (1u << 16))
        throw FormatError(std::string(what) + ": implausible side length " + std::to_string(n));
    return static_cast<std::size_t>(n);
}

inline SamplingMask read_mask_bytes(Reader& r, std::size_t n, std::string_view what)
{
    SamplingMask mask(n);
    for (std::size_t m = 0; m < n; ++m)
        for (std::size_t k = 0; k < n; ++k) {
            const unsigned char f = r.byte();
            if (f > 1)
                throw FormatError(std::string(what) + ": mask bytes must be 0 or 1");
            mask.set(m, k, f == 1);
        }
    return mask;
}

inline void put_mask_bytes(std::string& out, const SamplingMask& mask)
{
    for (std::size_t idx = 0; idx < mask.size(); ++idx)
        out.push_back(mask[idx] ? '\1' : '\0');
}

} // namespace detail

inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes)
{
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline unsigned char to_gray(double v)
{
    return static_cast<unsigned char>(std::clamp(std::round(255.0 * v), 0.0, 255.0));
}

inline std::string encode_pgm(const Image& img)
{
    std::string out = "P5\n" + std::to_string(img.n()) + " " + std::to_string(img.n()) + "\n255\n";
    for (double v : img.samples())
        out.push_back(static_cast<char>(to_gray(v)));
    return out;
}

inline std::string encode_image(const Image& img)
{
    std::string out = "FPR1";
    detail::put_u64(out, img.n());
    for (double v : img.samples())
        detail::put_f64(out, v);
    return out;
}

inline Image decode_image(std::string_view bytes)
{
    detail::Reader r(bytes, "FPR1");
    r.expect_magic("FPR1");
    const std::size_t n = detail::read_side(r, "FPR1");
    std::vector<double> samples(n * n);
    for (double& v : samples)
        v = r.f64();
    r.expect_end();
    return Image(n, std::move(samples));
}

inline std::string encode_mask(const SamplingMask& mask)
{
    std::string out = "FPM1";
    detail::put_u64(out, mask.n());
    detail::put_mask_bytes(out, mask);
    return out;
}

inline SamplingMask decode_mask(std::string_view bytes)
{
    detail::Reader r(bytes, "FPM1");
    r.expect_magic("FPM1");
    const std::size_t n = detail::read_side(r, "FPM1");
    SamplingMask mask = detail::read_mask_bytes(r, n, "FPM1");
    r.expect_end();
    return mask;
}

inline std::string encode_observation(const Observation& obs)
{
    std::string out = "FPO1";
    detail::put_u64(out, obs.n());
    detail::put_mask_bytes(out, obs.mask);
    for (std::size_t idx = 0; idx < obs.mask.size(); ++idx) {
        if (!obs.mask[idx])
            continue;
        detail::put_f64(out, obs.values[idx].real());
        detail::put_f64(out, obs.values[idx].imag());
    }
    return out;
}

inline Observation decode_observation(std::string_view bytes)
{
    detail::Reader r(bytes, "FPO1");
    r.expect_magic("FPO1");
    const std::size_t n = detail::read_side(r, "FPO1");
    Observation obs{detail::read_mask_bytes(r, n, "FPO1"), Spectrum(n)};
    for (std::size_t idx = 0; idx < obs.mask.size(); ++idx) {
        if (!obs.mask[idx])
            continue;
        const double re = r.f64();
        const double im = r.f64();
        obs.values[idx] = Complex{re, im};
    }
    r.expect_end();
    altproj::validate(obs);
    return obs;
}

inline void write_pgm(const std::filesystem::path& path, const Image& img) { write_file_atomic(path, encode_pgm(img)); }
inline void write_image(const std::filesystem::path& path, const Image& img) { write_file_atomic(path, encode_image(img)); }
inline Image read_image(const std::filesystem::path& path) { return decode_image(read_file(path)); }
inline void write_mask(const std::filesystem::path& path, const SamplingMask& m) { write_file_atomic(path, encode_mask(m)); }
inline SamplingMask read_mask(const std::filesystem::path& path) { return decode_mask(read_file(path)); }

inline void write_observation(const std::filesystem::path& path, const Observation& obs)
{
    write_file_atomic(path, encode_observation(obs));
}

inline Observation read_observation(const std::filesystem::path& path) { return decode_observation(read_file(path)); }

} // namespace altproj::io
