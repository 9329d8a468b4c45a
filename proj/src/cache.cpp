#include "boltz/cache.hpp"

#include <bit>
#include <complex>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace boltz {

static_assert(std::endian::native == std::endian::little, "cache format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'B', 'O', 'L', 'T', 'Z', 'K', 'M', '\0'};
constexpr std::uint32_t kVersion = 1;

struct Header {
    std::uint32_t rep = 0;
    std::int32_t d = 0, n = 0;
    double gamma = 0, C = 0, R = 0, T = 0;
    std::int32_t M1 = 0, M2 = 0;
    std::uint64_t count = 0;
};

template <class T>
void put(std::ofstream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw std::runtime_error("kernel cache: truncated header");
    return v;
}

void write_file(const std::string& path, const Header& h, const std::vector<double>& payload) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("kernel cache: cannot write " + path);
    os.write(kMagic, sizeof kMagic);
    put(os, kVersion);
    put(os, h.rep);
    put(os, h.d);
    put(os, h.n);
    put(os, h.gamma);
    put(os, h.C);
    put(os, h.R);
    put(os, h.T);
    put(os, h.M1);
    put(os, h.M2);
    put(os, static_cast<std::uint64_t>(payload.size()));
    for (double v : payload) {
        std::complex<double> c(v, 0.0);
        os.write(reinterpret_cast<const char*>(&c), sizeof c);
    }
    if (!os) throw std::runtime_error("kernel cache: write failed for " + path);
}

std::vector<double> read_file(const std::string& path, const Header& want) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("kernel cache: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof magic);
    if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0) throw std::runtime_error("kernel cache: bad magic in " + path);
    if (get<std::uint32_t>(is) != kVersion) throw std::runtime_error("kernel cache: unsupported version in " + path);
    Header h;
    h.rep = get<std::uint32_t>(is);
    h.d = get<std::int32_t>(is);
    h.n = get<std::int32_t>(is);
    h.gamma = get<double>(is);
    h.C = get<double>(is);
    h.R = get<double>(is);
    h.T = get<double>(is);
    h.M1 = get<std::int32_t>(is);
    h.M2 = get<std::int32_t>(is);
    h.count = get<std::uint64_t>(is);
    if (h.rep != want.rep || h.d != want.d || h.n != want.n || h.gamma != want.gamma || h.C != want.C ||
        h.R != want.R || h.T != want.T || h.M1 != want.M1 || h.M2 != want.M2)
        throw std::runtime_error("kernel cache: header of " + path + " does not match the requested tables");
    std::vector<double> out(h.count);
    for (auto& v : out) {
        std::complex<double> c;
        is.read(reinterpret_cast<char*>(&c), sizeof c);
        if (!is) throw std::runtime_error("kernel cache: truncated payload in " + path);
        v = c.real();
    }
    return out;
}

Header classical_header(const VelocityGrid& g, const VHSKernel& k, double R) {
    return {0, g.d, g.n, k.gamma, k.C, R, g.T, 0, 0, 0};
}

Header fast_header(const VelocityGrid& g, const VHSKernel& k, double R, int M1, int M2) {
    return {1, g.d, g.n, k.gamma, k.C, R, g.T, M1, g.d == 2 ? M1 : M2, 0};
}

std::string cache_name(const char* tag, const Header& h) {
    std::ostringstream os;
    os << tag << "_d" << h.d << "_n" << h.n << "_g" << std::setprecision(17) << h.gamma << "_C" << h.C << "_R" << h.R
       << "_T" << h.T;
    if (h.rep == 1) os << "_M" << h.M1 << "x" << h.M2;
    os << ".bin";
    return os.str();
}

}  // namespace

void save_classical(const ClassicalModesTable& t, const std::string& path) {
    std::vector<double> payload(t.F);
    payload.insert(payload.end(), t.diag.begin(), t.diag.end());
    write_file(path, classical_header(t.grid, t.kernel, t.R), payload);
}

void save_fast(const FastKernelTables& t, const std::string& path) {
    std::vector<double> payload;
    for (const auto& a : t.alpha) payload.insert(payload.end(), a.begin(), a.end());
    for (const auto& b : t.alphap) payload.insert(payload.end(), b.begin(), b.end());
    payload.insert(payload.end(), t.diag.begin(), t.diag.end());
    write_file(path, fast_header(t.grid, t.kernel, t.R, t.M1, t.M2), payload);
}

ClassicalModesTable load_classical(const std::string& path, const VelocityGrid& grid, const VHSKernel& kernel,
                                   double R) {
    auto payload = read_file(path, classical_header(grid, kernel, R));
    ClassicalModesTable t;
    t.grid = grid;
    t.kernel = kernel;
    t.R = R;
    const std::size_t rows = reachable_norms(grid.d, grid.n).size();
    if (payload.size() != rows * rows + grid.size()) throw std::runtime_error("kernel cache: payload size mismatch in " + path);
    t.F.assign(payload.begin(), payload.begin() + static_cast<std::ptrdiff_t>(rows * rows));
    finalize_classical_table(t);
    return t;
}

FastKernelTables load_fast(const std::string& path, const VelocityGrid& grid, const VHSKernel& kernel, double R,
                           int M1, int M2) {
    auto h = fast_header(grid, kernel, R, M1, M2);
    auto payload = read_file(path, h);
    // direction count is fixed by the angle set; rebuild the cheap metadata
    auto as = make_angle_set(grid.d, h.M1, h.M2);
    std::size_t dirs = 0;
    for (double th : as.theta)
        if (grid.d == 2 || std::sin(th) >= 1e-14) ++dirs;
    const std::size_t N = grid.size();
    if (payload.size() != (2 * dirs + 1) * N) throw std::runtime_error("kernel cache: payload size mismatch in " + path);
    FastKernelTables t;
    t.grid = grid;
    t.kernel = kernel;
    t.R = R;
    t.M1 = h.M1;
    t.M2 = h.M2;
    t.weight = carleman_constant(grid.d, kernel) * as.weight;
    auto it = payload.begin();
    for (std::size_t p = 0; p < dirs; ++p, it += static_cast<std::ptrdiff_t>(N)) t.alpha.emplace_back(it, it + static_cast<std::ptrdiff_t>(N));
    for (std::size_t p = 0; p < dirs; ++p, it += static_cast<std::ptrdiff_t>(N)) t.alphap.emplace_back(it, it + static_cast<std::ptrdiff_t>(N));
    t.diag.assign(it, it + static_cast<std::ptrdiff_t>(N));
    return t;
}

ClassicalModesTable cached_classical_modes(const std::string& cache_dir, const VelocityGrid& grid,
                                           const VHSKernel& kernel, double R) {
    if (cache_dir.empty()) return compute_classical_modes(grid, kernel, R);
    namespace fs = std::filesystem;
    fs::create_directories(cache_dir);
    auto path = (fs::path(cache_dir) / cache_name("classical", classical_header(grid, kernel, R))).string();
    if (fs::exists(path)) return load_classical(path, grid, kernel, R);
    auto t = compute_classical_modes(grid, kernel, R);
    save_classical(t, path);
    return t;
}

FastKernelTables cached_fast_decomposition(const std::string& cache_dir, const VelocityGrid& grid,
                                           const VHSKernel& kernel, double R, int M1, int M2) {
    if (cache_dir.empty()) return build_fast_decomposition(grid, kernel, R, M1, M2);
    namespace fs = std::filesystem;
    fs::create_directories(cache_dir);
    auto path = (fs::path(cache_dir) / cache_name("carleman", fast_header(grid, kernel, R, M1, M2))).string();
    if (fs::exists(path)) return load_fast(path, grid, kernel, R, M1, M2);
    auto t = build_fast_decomposition(grid, kernel, R, M1, M2);
    save_fast(t, path);
    return t;
}

}  // namespace boltz
