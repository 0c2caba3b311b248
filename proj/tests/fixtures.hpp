#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "catfish/corpus.hpp"
#include "catfish/features.hpp"
#include "catfish/textfeat.hpp"

namespace fixture {

inline catfish::Profile profile(std::string id, catfish::Gender g, int age,
                                std::vector<std::string> comments, bool verified = true) {
  catfish::Profile p;
  p.id = std::move(id);
  p.verified = verified;
  p.reported_gender = g;
  p.reported_age = age;
  p.country = "us";
  for (auto& c : comments) p.comments.push_back({std::move(c)});
  return p;
}

inline std::vector<std::string> repeat(const std::string& text, std::size_t n) {
  return std::vector<std::string>(n, text);
}

inline std::vector<const catfish::Profile*> pointers(const catfish::Corpus& c) {
  std::vector<const catfish::Profile*> out;
  for (const auto& p : c.profiles) out.push_back(&p);
  return out;
}

// Fresh directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("catfish_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::vector<std::vector<double>> random_dense(std::mt19937_64& g, std::size_t n,
                                                     std::size_t d, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<std::vector<double>> x(n, std::vector<double>(d));
  for (auto& r : x)
    for (auto& v : r) v = u(g);
  return x;
}

}  // namespace fixture
