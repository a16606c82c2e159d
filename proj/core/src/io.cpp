#include "regulab/io.hpp"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "json.hpp"

namespace regulab {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void write_bytes(std::ofstream& out, const void* p, std::size_t len) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(len));
}

std::vector<std::uint8_t> density_bytes(const DensityFunction& f) {
    std::vector<std::uint8_t> buf;
    buf.reserve(12 + 8 * f.size());
    auto push = [&](const void* p, std::size_t len) {
        const auto* b = static_cast<const std::uint8_t*>(p);
        buf.insert(buf.end(), b, b + len);
    };
    push("FPFN", 4);
    std::uint32_t p = f.p(), n = f.n();
    push(&p, 4);
    push(&n, 4);
    for (std::uint64_t x = 0; x < f.size(); ++x) {
        double v = f[x];
        std::uint64_t bits;
        std::memcpy(&bits, &v, 8);
        std::uint8_t le[8];
        for (int k = 0; k < 8; ++k) le[k] = static_cast<std::uint8_t>(bits >> (8 * k));
        push(le, 8);
    }
    return buf;
}

json json_with_hex(const std::vector<double>& vals) {
    json a = json::array();
    for (double v : vals) a.push_back(to_hexfloat(v));
    return a;
}

json coords_json(const FieldVector& v) {
    json a = json::array();
    for (std::uint32_t k = 0; k < v.n(); ++k) a.push_back(static_cast<int>(v[k]));
    return a;
}

FieldVector coords_from_json(std::uint32_t p, const json& a) {
    std::vector<std::uint8_t> c;
    for (const auto& e : a) c.push_back(e.get<std::uint8_t>());
    return FieldVector(p, std::move(c));
}

// upper-triangle coefficients recovering M via from_upper_triangle
std::vector<std::uint8_t> upper_of(const QuadPoly& q) {
    std::vector<std::uint8_t> upper;
    for (std::uint32_t i = 0; i < q.n; ++i)
        for (std::uint32_t j = i; j < q.n; ++j)
            upper.push_back(i == j ? q.M[i][j]
                                   : static_cast<std::uint8_t>(2 * q.M[i][j] % q.p));
    return upper;
}

void atomic_write(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << text;
    if (!out) throw IoError("write failed: " + path);
}

json load_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw IoError("bad JSON in " + path + ": " + e.what());
    }
    return j;
}

}  // namespace

void save_density(const std::string& path, const DensityFunction& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path);
    auto buf = density_bytes(f);
    write_bytes(out, buf.data(), buf.size());
    if (!out) throw IoError("write failed: " + path);
}

DensityFunction load_density(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open: " + path);
    char magic[4];
    std::uint32_t p = 0, n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&p), 4);
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in || std::memcmp(magic, "FPFN", 4) != 0)
        throw IoError("not a density table: " + path);
    std::uint64_t size = require_budget(p, n, "load_density");
    std::vector<double> table(size);
    for (std::uint64_t x = 0; x < size; ++x) {
        std::uint8_t le[8];
        in.read(reinterpret_cast<char*>(le), 8);
        if (!in) throw IoError("truncated density table: " + path);
        std::uint64_t bits = 0;
        for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(le[k]) << (8 * k);
        std::memcpy(&table[x], &bits, 8);
    }
    return DensityFunction(p, n, std::move(table));
}

std::string to_hexfloat(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

double from_hexfloat(const std::string& s) {
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str()) throw IoError("bad hexfloat: " + s);
    return v;
}

std::string density_digest(const DensityFunction& f) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (std::uint8_t b : density_bytes(f)) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void save_instance(const Instance& inst, const std::string& json_path,
                   const std::string& density_path) {
    save_density(density_path, inst.f);
    json j;
    j["format"] = "regulab-instance-v1";
    j["p"] = inst.p;
    j["n"] = inst.n;
    j["s"] = inst.s;
    j["seed"] = inst.seed;
    j["weights"] = json_with_hex(inst.weights);
    json tuples = json::array();
    for (const auto& t : inst.tuples) {
        json vecs = json::array();
        for (const auto& v : t.vectors) vecs.push_back(coords_json(v));
        tuples.push_back({{"layer", t.layer}, {"vectors", vecs}});
    }
    j["tuples"] = tuples;
    j["layers"] = inst.layer_labels;
    j["density_file"] = fs::path(density_path).filename().string();
    j["digest"] = density_digest(inst.f);
    atomic_write(json_path, j.dump(2) + "\n");
}

Instance load_instance(const std::string& json_path) {
    json j = load_json(json_path);
    if (j.value("format", "") != "regulab-instance-v1")
        throw IoError("not an instance manifest: " + json_path);
    Instance inst;
    inst.p = j.at("p").get<std::uint32_t>();
    inst.n = j.at("n").get<std::uint32_t>();
    inst.s = j.at("s").get<std::uint32_t>();
    inst.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& w : j.at("weights")) inst.weights.push_back(from_hexfloat(w));
    for (const auto& t : j.at("tuples")) {
        SpanningTuple st;
        st.layer = t.at("layer").get<std::uint32_t>();
        for (const auto& v : t.at("vectors")) st.vectors.push_back(coords_from_json(inst.p, v));
        inst.tuples.push_back(std::move(st));
    }
    inst.layer_labels = j.at("layers").get<std::vector<std::vector<std::uint64_t>>>();

    std::uint64_t size = require_budget(inst.p, inst.n, "load_instance");
    if (inst.s > 0) {
        DimensionSchedule sch = dimension_schedule(inst.p, inst.s);
        inst.D = sch.D_small();
        inst.d = sch.d_small();
        if (inst.D.back() > inst.n) throw IoError("instance manifest: n < D_s");
    }
    if (inst.layer_labels.size() != inst.s || inst.tuples.size() != inst.s)
        throw IoError("instance manifest: layer/tuple count != s");

    // re-derive f exactly as the constructor does, then demand a bit-for-bit
    // match with the stored binary
    std::vector<std::vector<char>> member(inst.s);
    for (std::uint32_t i = 1; i <= inst.s; ++i) {
        std::uint64_t label_count =
            checked_pow(inst.p, static_cast<std::uint32_t>(inst.D[i - 1]));
        member[i - 1].assign(label_count, 0);
        for (std::uint64_t v : inst.layer_labels[i - 1]) {
            if (v >= label_count) throw IoError("instance manifest: label out of range");
            member[i - 1][v] = 1;
        }
    }
    DensityFunction f(inst.p, inst.n);
    for (std::uint64_t idx = 0; idx < size; ++idx) {
        double v = 0.0;
        for (std::uint32_t i = 1; i <= inst.s; ++i) {
            std::uint64_t label_count = member[i - 1].size();
            if (member[i - 1][idx % label_count]) v += inst.weights[i - 1];
        }
        f[idx] = v;
    }

    fs::path density = fs::path(json_path).parent_path() / j.at("density_file").get<std::string>();
    DensityFunction stored = load_density(density.string());
    if (stored.p() != inst.p || stored.n() != inst.n)
        throw IoError("density table mismatches manifest dimensions");
    for (std::uint64_t idx = 0; idx < size; ++idx)
        if (std::memcmp(&stored[idx], &f[idx], 8) != 0)
            throw IoError("stored density disagrees with the re-derived table at index " +
                          std::to_string(idx));
    inst.f = std::move(stored);
    return inst;
}

void save_factor(const QuadraticFactor& B, const std::string& path) {
    json j;
    j["format"] = "regulab-factor-v1";
    j["p"] = B.p;
    j["n"] = B.n;
    json lin = json::array();
    for (const auto& q : B.linear_polys)
        lin.push_back({{"b", coords_json(q.b)}, {"c", static_cast<int>(q.c)}});
    json quad = json::array();
    for (const auto& q : B.quad_polys)
        quad.push_back({{"upper", upper_of(q)},
                        {"b", coords_json(q.b)},
                        {"c", static_cast<int>(q.c)}});
    j["linear"] = lin;
    j["quadratic"] = quad;
    atomic_write(path, j.dump(2) + "\n");
}

QuadraticFactor load_factor(const std::string& path) {
    json j = load_json(path);
    if (j.value("format", "") != "regulab-factor-v1")
        throw IoError("not a factor file: " + path);
    QuadraticFactor B;
    B.p = j.at("p").get<std::uint32_t>();
    B.n = j.at("n").get<std::uint32_t>();
    for (const auto& q : j.at("linear"))
        B.linear_polys.push_back(QuadPoly::linear(coords_from_json(B.p, q.at("b")),
                                                  q.at("c").get<std::uint8_t>()));
    for (const auto& q : j.at("quadratic")) {
        std::vector<std::uint8_t> upper = q.at("upper").get<std::vector<std::uint8_t>>();
        B.quad_polys.push_back(QuadPoly::from_upper_triangle(
            B.p, B.n, upper, coords_from_json(B.p, q.at("b")), q.at("c").get<std::uint8_t>()));
    }
    B.validate();
    return B;
}

void save_report(const Report& r, const std::string& path) {
    json j;
    j["proposition"] = r.proposition;
    j["instance_digest"] = r.instance_digest;
    json w = json::array();
    for (const auto& [name, value] : r.witnesses)
        w.push_back({{"name", name}, {"value", value}});
    j["witnesses"] = w;
    j["pass"] = r.pass;
    atomic_write(path, j.dump(2) + "\n");
}

void save_trace(const std::vector<QarlTraceEntry>& trace, const std::string& path) {
    std::string out;
    for (const auto& t : trace) {
        json j;
        j["step"] = t.step;
        j["kind"] = t.kind;
        j["D"] = t.D;
        if (t.rank_infinite)
            j["rank"] = "inf";
        else
            j["rank"] = t.rank;
        j["energy"] = to_hexfloat(t.energy);
        j["u3_residual"] = to_hexfloat(t.u3_residual);
        j["correlation"] = to_hexfloat(t.correlation);
        if (t.poly) j["poly"] = t.poly->str();
        out += j.dump();
        out += '\n';
    }
    atomic_write(path, out);
}

void save_manifest(const RunManifest& m, const std::string& path) {
    json j;
    j["command"] = m.command;
    j["seed"] = m.seed;
    json params = json::object();
    for (const auto& [k, v] : m.params) params[k] = v;
    j["params"] = params;
    j["inputs"] = m.inputs;
    j["outputs"] = m.outputs;
    j["version"] = m.version;
    j["wall_clock_s"] = to_hexfloat(m.wall_clock_s);
    atomic_write(path, j.dump(2) + "\n");
}

}  // namespace regulab
