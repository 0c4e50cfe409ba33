#include "tlw/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>

namespace tlw {

namespace fs = std::filesystem;

namespace {

constexpr int kFormatVersion = 1;

std::uint64_t to_little(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

void write_f64le(const fs::path& path, std::span<const double> xs) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    for (double x : xs) {
        const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(x));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        os.write(buf, 8);
    }
    if (!os) throw IoError("write failed: " + path.string());
}

std::vector<double> read_f64le(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    std::vector<char> bytes((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (bytes.size() % 8 != 0) throw IoError("binary length is not a multiple of 8: " + path.string());
    std::vector<double> out(bytes.size() / 8);
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, bytes.data() + 8 * i, 8);
        out[i] = std::bit_cast<double>(to_little(bits));
    }
    return out;
}

// One row per value, `width` comma-separated columns.
void write_csv(const fs::path& path, std::span<const double> xs, int width) {
    std::ostringstream os;
    os.precision(std::numeric_limits<double>::max_digits10);
    for (std::size_t i = 0; i < xs.size(); ++i) os << xs[i] << ((i + 1) % width == 0 ? '\n' : ',');
    write_text(path, os.str());
}

std::vector<double> read_csv(const fs::path& path) {
    std::istringstream is(read_text(path));
    std::vector<double> out;
    std::string line;
    while (std::getline(is, line)) {
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) {
            if (cell.empty()) continue;
            // from_chars keeps subnormals that stod rejects as out of range.
            double v = 0.0;
            const char* end = cell.data() + cell.size();
            while (end > cell.data() && (end[-1] == '\r' || end[-1] == ' ')) --end;
            const char* begin = cell.data();
            while (begin < end && *begin == ' ') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, v);
            if (ec != std::errc() || ptr != end || begin == end)
                throw IoError("bad CSV value '" + cell + "' in " + path.string());
            out.push_back(v);
        }
    }
    return out;
}

fs::path data_path(const fs::path& header, Encoding e) {
    fs::path p = header;
    p.replace_extension(e == Encoding::Binary ? ".f64" : ".csv");
    return p;
}

Json grid_header(const Grid& g) { return Json{{"n", g.dimension()}, {"L", g.domain_exponent()}, {"J", g.finest_level()}}; }

Grid parse_grid(const Json& h, const fs::path& where) {
    try {
        return Grid(h.at("n").get<int>(), h.at("L").get<int>(), h.at("J").get<int>());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad header " + where.string() + ": " + e.what());
    }
}

void write_header(const fs::path& header, const Json& h) { write_text(header, h.dump(2) + "\n"); }

std::vector<double> read_data(const fs::path& header, const Json& h) {
    try {
        const fs::path data = header.parent_path() / h.at("data").get<std::string>();
        const std::string enc = h.value("encoding", "f64le");
        if (enc == "f64le") return read_f64le(data);
        if (enc == "csv") return read_csv(data);
        throw IoError("unknown encoding '" + enc + "' in " + header.string());
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad header " + header.string() + ": " + e.what());
    }
}

void store(const fs::path& header, Json h, std::span<const double> flat, Encoding e, int width,
           const Json& extra) {
    const fs::path data = data_path(header, e);
    h["encoding"] = e == Encoding::Binary ? "f64le" : "csv";
    h["data"] = data.filename().string();
    for (const auto& [key, value] : extra.items()) h[key] = value;
    if (e == Encoding::Binary)
        write_f64le(data, flat);
    else
        write_csv(data, flat, width);
    write_header(header, h);
}

std::vector<double> interleave(std::span<const Complex> zs) {
    std::vector<double> flat;
    flat.reserve(2 * zs.size());
    for (const Complex& z : zs) {
        flat.push_back(z.real());
        flat.push_back(z.imag());
    }
    return flat;
}

}  // namespace

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path.string());
    os << text;
    if (!os) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open for reading: " + path.string());
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

Json read_header(const fs::path& header) {
    try {
        return Json::parse(read_text(header));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad JSON in " + header.string() + ": " + e.what());
    }
}

void write_grid_function(const fs::path& header, const GridFunction& f, Encoding encoding, const Json& extra) {
    Json h = grid_header(f.grid());
    h["format"] = "grid-function";
    h["version"] = kFormatVersion;
    h["complex"] = false;
    store(header, std::move(h), f.values(), encoding, 1, extra);
}

void write_grid_function(const fs::path& header, const ComplexGridFunction& f, Encoding encoding, const Json& extra) {
    Json h = grid_header(f.grid());
    h["format"] = "grid-function";
    h["version"] = kFormatVersion;
    h["complex"] = true;
    store(header, std::move(h), interleave(f.values()), encoding, 2, extra);
}

ComplexGridFunction read_complex_grid_function(const fs::path& header) {
    const Json h = read_header(header);
    const Grid grid = parse_grid(h, header);
    const bool is_complex = h.value("complex", false);
    const auto flat = read_data(header, h);
    const auto expected = static_cast<std::size_t>(grid.cell_count()) * (is_complex ? 2 : 1);
    if (flat.size() != expected)
        throw IoError("expected " + std::to_string(expected) + " values in data of " + header.string() + ", got " +
                      std::to_string(flat.size()));
    ComplexGridFunction f(grid);
    for (Index c = 0; c < f.size(); ++c)
        f[c] = is_complex ? Complex(flat[2 * c], flat[2 * c + 1]) : Complex(flat[c], 0.0);
    return f;
}

GridFunction read_grid_function(const fs::path& header) {
    if (read_header(header).value("complex", false))
        throw IoError("complex data where a real grid function was expected: " + header.string());
    const ComplexGridFunction z = read_complex_grid_function(header);
    GridFunction f(z.grid());
    for (Index c = 0; c < f.size(); ++c) f[c] = z[c].real();
    return f;
}

void write_coeff_field(const fs::path& header, const CoeffField& lambda) {
    Json h = grid_header(lambda.grid());
    h["format"] = "coeff-field";
    h["version"] = kFormatVersion;
    h["k_min"] = lambda.k_min();
    h["k_max"] = lambda.k_max();
    std::vector<double> flat;
    for (int k = lambda.k_min(); k <= lambda.k_max(); ++k) {
        const auto part = interleave(lambda.level(k));
        flat.insert(flat.end(), part.begin(), part.end());
    }
    store(header, std::move(h), flat, Encoding::Binary, 2, Json::object());
}

CoeffField read_coeff_field(const fs::path& header) {
    const Json h = read_header(header);
    const Grid grid = parse_grid(h, header);
    int k_min = 0, k_max = 0;
    try {
        k_min = h.at("k_min").get<int>();
        k_max = h.at("k_max").get<int>();
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad header " + header.string() + ": " + e.what());
    }
    CoeffField lambda(grid, k_min, k_max);
    const auto flat = read_data(header, h);
    if (flat.size() != 2 * static_cast<std::size_t>(lambda.size()))
        throw IoError("coefficient count mismatch in " + header.string());
    std::size_t pos = 0;
    for (int k = k_min; k <= k_max; ++k)
        for (Complex& z : lambda.level(k)) {
            z = Complex(flat[pos], flat[pos + 1]);
            pos += 2;
        }
    return lambda;
}

void write_weights(const fs::path& header, const WeightSequence& w, const Json& extra) {
    Json h = grid_header(w.grid());
    h["format"] = "weight-sequence";
    h["version"] = kFormatVersion;
    h["k_min"] = w.k_min();
    h["k_max"] = w.k_max();
    const WeightMeta& m = w.meta();
    h["meta"] = Json{{"p", m.p}, {"alpha1", m.alpha1}, {"alpha2", m.alpha2}, {"sigma1", m.sigma1}, {"sigma2", m.sigma2}};
    std::vector<double> flat;
    for (int k = w.k_min(); k <= w.k_max(); ++k) {
        const auto v = w.at(k).values();
        flat.insert(flat.end(), v.begin(), v.end());
    }
    store(header, std::move(h), flat, Encoding::Binary, 1, extra);
}

WeightSequence read_weights(const fs::path& header) {
    const Json h = read_header(header);
    const Grid grid = parse_grid(h, header);
    int k_min = 0, k_max = 0;
    WeightMeta meta;
    try {
        k_min = h.at("k_min").get<int>();
        k_max = h.at("k_max").get<int>();
        if (h.contains("meta")) {
            const Json& m = h["meta"];
            meta.p = m.value("p", meta.p);
            meta.alpha1 = m.value("alpha1", meta.alpha1);
            meta.alpha2 = m.value("alpha2", meta.alpha2);
            meta.sigma1 = m.value("sigma1", meta.sigma1);
            meta.sigma2 = m.value("sigma2", meta.sigma2);
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError("bad header " + header.string() + ": " + e.what());
    }
    if (k_min > k_max || !grid.has_level(k_min) || !grid.has_level(k_max))
        throw IoError("level range outside the grid in " + header.string());
    const auto flat = read_data(header, h);
    const auto per_level = static_cast<std::size_t>(grid.cell_count());
    if (flat.size() != per_level * static_cast<std::size_t>(k_max - k_min + 1))
        throw IoError("weight value count mismatch in " + header.string());
    std::vector<GridFunction> levels;
    for (int k = k_min; k <= k_max; ++k) {
        const auto first = flat.begin() + static_cast<std::ptrdiff_t>(per_level * (k - k_min));
        levels.emplace_back(grid, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(per_level)));
    }
    return WeightSequence(grid, k_min, std::move(levels), meta);
}

}  // namespace tlw
