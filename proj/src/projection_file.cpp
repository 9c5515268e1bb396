#include <bit>
#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

#include "patternlens/error.hpp"
#include "patternlens/transforms.hpp"

namespace patternlens {
namespace {

static_assert(std::endian::native == std::endian::little, "projection files are little-endian");

constexpr const char* kRoles[] = {"query", "key", "value", "fuse"};

std::optional<Eigen::MatrixXd>& slot(ProjectionSet& set, std::string_view role) {
  if (role == "query") return set.query;
  if (role == "key") return set.key;
  if (role == "value") return set.value;
  if (role == "fuse") return set.fuse;
  fail(ErrorCode::InvalidArgument, "unknown projection role '" + std::string(role) + "'");
}

const std::optional<Eigen::MatrixXd>& slot(const ProjectionSet& set, std::string_view role) {
  return slot(const_cast<ProjectionSet&>(set), role);
}

}  // namespace

ProjectionSet load_projections(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open projection file " + path.string());

  std::uint64_t header_len = 0;
  in.read(reinterpret_cast<char*>(&header_len), sizeof header_len);
  if (!in || header_len == 0 || header_len > (1u << 20)) {
    fail(ErrorCode::IoError, "bad projection header length in " + path.string());
  }
  std::string header(header_len, '\0');
  in.read(header.data(), static_cast<std::streamsize>(header_len));
  if (!in) fail(ErrorCode::IoError, "truncated projection header in " + path.string());

  ProjectionSet set;
  try {
    const auto j = nlohmann::json::parse(header);
    for (const auto& entry : j.at("matrices")) {
      const auto role = entry.at("role").get<std::string>();
      const auto rows = entry.at("rows").get<Eigen::Index>();
      const auto cols = entry.at("cols").get<Eigen::Index>();
      if (rows <= 0 || rows != cols) fail(ErrorCode::InvalidArgument, "projection '" + role + "' must be square");
      auto& target = slot(set, role);
      if (target) fail(ErrorCode::InvalidArgument, "duplicate projection role '" + role + "'");
      Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(rows, cols);
      in.read(reinterpret_cast<char*>(m.data()), static_cast<std::streamsize>(m.size() * sizeof(double)));
      if (!in) fail(ErrorCode::IoError, "truncated data for projection '" + role + "'");
      target = Eigen::MatrixXd(m);
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::IoError, std::string("invalid projection header: ") + e.what());
  }
  return set;
}

void save_projections(const ProjectionSet& set, const std::filesystem::path& path) {
  nlohmann::ordered_json matrices = nlohmann::ordered_json::array();
  for (const char* role : kRoles) {
    if (const auto& m = slot(set, role)) matrices.push_back({{"role", role}, {"rows", m->rows()}, {"cols", m->cols()}});
  }
  const std::string header = nlohmann::ordered_json{{"matrices", matrices}}.dump();

  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write projection file " + path.string());
  const std::uint64_t header_len = header.size();
  out.write(reinterpret_cast<const char*>(&header_len), sizeof header_len);
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const char* role : kRoles) {
    if (const auto& m = slot(set, role)) {
      const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = *m;
      out.write(reinterpret_cast<const char*>(rm.data()), static_cast<std::streamsize>(rm.size() * sizeof(double)));
    }
  }
  if (!out) fail(ErrorCode::IoError, "failed writing " + path.string());
}

}  // namespace patternlens
