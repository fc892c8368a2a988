#pragma once
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "patmg/field.hpp"
#include "patmg/sensors.hpp"

namespace patmg {

// Per-iteration reconstruction record (CSV row). RE is NaN when no ground
// truth is available; the CSV cell is then left empty.
struct IterationRecord {
  int k = 0;
  std::string kind;  // "direct" | "recursive"
  double cpu_seconds = 0;
  double F = 0;
  double RES = 0;
  double RE = std::numeric_limits<double>::quiet_NaN();
};

// Binary field file: 12-byte magic "PATMG-FIELD\0", u32 version, u32 rank,
// u32 dims[rank], float64 row-major payload. All little-endian. A JSON sidecar
// at <path>.json carries physical metadata.
void write_field(const std::filesystem::path& path, const Field& f,
                 const nlohmann::json& sidecar = nlohmann::json::object());
Field read_field(const std::filesystem::path& path);
nlohmann::json read_sidecar(const std::filesystem::path& path);

void write_sensor_data(const std::filesystem::path& path, const SensorData& d);
SensorData read_sensor_data(const std::filesystem::path& path);

void write_records_csv(const std::filesystem::path& path,
                       std::span<const IterationRecord> records);
std::vector<IterationRecord> read_records_csv(const std::filesystem::path& path);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

}  // namespace patmg
