#include "manifest.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifndef TERRANAV_VERSION
#define TERRANAV_VERSION "unknown"
#endif

namespace terranav::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md;
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md.data(), &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return hex.str();
}

void write_manifest(const std::filesystem::path& dir, const Manifest& m) {
  nlohmann::ordered_json j;
  j["tool"] = "terranav";
  j["version"] = TERRANAV_VERSION;
  j["command"] = m.command;
  j["seed"] = m.seed;
  j["args"] = m.args;
  j["inputs"] = nlohmann::json::array();
  for (const auto& p : m.inputs) j["inputs"].push_back({{"path", p.string()}, {"sha256", sha256_file(p)}});

  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().filename() != "manifest.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  j["outputs"] = nlohmann::json::array();
  for (const auto& p : files) {
    j["outputs"].push_back({{"file", p.filename().string()}, {"sha256", sha256_file(p)}});
  }
  std::ofstream out(dir / "manifest.json");
  if (!out) throw std::runtime_error("cannot write " + (dir / "manifest.json").string());
  out << j.dump(2) << '\n';
}

}  // namespace terranav::cli
