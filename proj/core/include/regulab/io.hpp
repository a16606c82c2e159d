#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "regulab/construction.hpp"
#include "regulab/fourier.hpp"
#include "regulab/qarl.hpp"
#include "regulab/quadratic.hpp"

namespace regulab {

struct IoError : Error {
    using Error::Error;
};

// binary density table: magic "FPFN", u32 p, u32 n, then p^n little-endian
// IEEE-754 doubles in index order; round-trips bit-exactly
void save_density(const std::string& path, const DensityFunction& f);
DensityFunction load_density(const std::string& path);

// IEEE-754 hex string ("%a") round-trip; all floats in JSON artifacts use it
std::string to_hexfloat(double v);
double from_hexfloat(const std::string& s);

// FNV-1a over the density's binary serialization, 16 hex digits
std::string density_digest(const DensityFunction& f);

// instance manifest: JSON (p, n, s, seed, weights, tuples as coordinate
// lists, layers as label lists) referencing the density binary; loading
// re-derives f from the stored data and throws IoError unless it matches
// the binary bit-for-bit
void save_instance(const Instance& inst, const std::string& json_path,
                   const std::string& density_path);
Instance load_instance(const std::string& json_path);

// factor JSON: linear polynomials as coefficient vectors, quadratic ones as
// the upper triangle of M plus b and c
void save_factor(const QuadraticFactor& B, const std::string& path);
QuadraticFactor load_factor(const std::string& path);

struct Report {
    std::string proposition;
    std::string instance_digest;
    std::vector<std::pair<std::string, std::string>> witnesses;  // name -> value
    bool pass = false;
};
void save_report(const Report& r, const std::string& path);

// JSON lines, one record per iteration:
// {step, kind, D, rank, energy, u3_residual, correlation, poly?}
void save_trace(const std::vector<QarlTraceEntry>& trace, const std::string& path);

struct RunManifest {
    std::string command;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::string version;
    double wall_clock_s = 0.0;
};
void save_manifest(const RunManifest& m, const std::string& path);

}  // namespace regulab
