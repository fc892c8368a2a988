#include "patmg/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

namespace patmg {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts are unsupported");

namespace {
constexpr char kMagic[12] = {'P', 'A', 'T', 'M', 'G', '-', 'F', 'I', 'E', 'L', 'D', '\0'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}
std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  return v;
}
}  // namespace

void write_field(const std::filesystem::path& path, const Field& f,
                 const nlohmann::json& sidecar) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os.write(kMagic, sizeof kMagic);
  put_u32(os, kVersion);
  put_u32(os, static_cast<std::uint32_t>(f.rank()));
  for (int a = 0; a < f.rank(); ++a) put_u32(os, static_cast<std::uint32_t>(f.dim(a)));
  os.write(reinterpret_cast<const char*>(f.data()),
           static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!os) throw std::runtime_error("write failed: " + path.string());
  if (!sidecar.is_null()) {
    std::ofstream js(path.string() + ".json");
    js << sidecar.dump(2) << "\n";
  }
}

Field read_field(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  char magic[12];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("not a field file: " + path.string());
  const std::uint32_t version = get_u32(is);
  if (version != kVersion)
    throw std::runtime_error("unsupported field file version " + std::to_string(version));
  const std::uint32_t rank = get_u32(is);
  if (rank < 1 || rank > 3) throw std::runtime_error("corrupt field file (rank)");
  std::vector<int> dims(rank);
  for (auto& d : dims) d = static_cast<int>(get_u32(is));
  Field f(dims);
  is.read(reinterpret_cast<char*>(f.data()),
          static_cast<std::streamsize>(f.size() * sizeof(double)));
  if (!is) throw std::runtime_error("truncated field file: " + path.string());
  return f;
}

nlohmann::json read_sidecar(const std::filesystem::path& path) {
  return read_json(path.string() + ".json");
}

void write_sensor_data(const std::filesystem::path& path, const SensorData& d) {
  Field f({d.num_sensors, d.nt});
  std::copy(d.samples.begin(), d.samples.end(), f.data());
  nlohmann::json side{{"kind", "sensor-data"}, {"dt", d.dt}, {"num_sensors", d.num_sensors},
                      {"nt", d.nt}};
  write_field(path, f, side);
}

SensorData read_sensor_data(const std::filesystem::path& path) {
  Field f = read_field(path);
  if (f.rank() != 2) throw std::runtime_error("sensor data file must be rank 2");
  auto side = read_sidecar(path);
  SensorData d(f.dim(0), f.dim(1), side.value("dt", 0.0));
  std::copy(f.data(), f.data() + f.size(), d.samples.begin());
  return d;
}

void write_records_csv(const std::filesystem::path& path,
                       std::span<const IterationRecord> records) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << "k,kind,cpu_seconds,F,RES,RE\n";
  os.precision(17);
  for (const auto& r : records) {
    os << r.k << ',' << r.kind << ',' << r.cpu_seconds << ',' << r.F << ',' << r.RES << ',';
    if (std::isfinite(r.RE)) os << r.RE;
    os << '\n';
  }
}

std::vector<IterationRecord> read_records_csv(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  std::string line;
  std::getline(is, line);  // header
  std::vector<IterationRecord> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    IterationRecord r;
    std::getline(ss, tok, ',');
    r.k = std::stoi(tok);
    std::getline(ss, r.kind, ',');
    std::getline(ss, tok, ',');
    r.cpu_seconds = std::stod(tok);
    std::getline(ss, tok, ',');
    r.F = std::stod(tok);
    std::getline(ss, tok, ',');
    r.RES = std::stod(tok);
    if (std::getline(ss, tok, ',') && !tok.empty()) r.RE = std::stod(tok);
    out.push_back(std::move(r));
  }
  return out;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  os << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open: " + path.string());
  nlohmann::json j;
  is >> j;
  return j;
}

}  // namespace patmg
