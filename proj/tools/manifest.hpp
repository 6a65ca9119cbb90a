#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace terranav::cli {

std::string sha256_file(const std::filesystem::path& path);

struct Manifest {
  std::string command;
  std::map<std::string, std::string> args;
  std::uint64_t seed = 0;
  std::vector<std::filesystem::path> inputs;
};

/// Writes manifest.json into `dir`, hashing every input and every regular file
/// already present in `dir`. Paths of outputs are stored relative to `dir`.
void write_manifest(const std::filesystem::path& dir, const Manifest& m);

}  // namespace terranav::cli
