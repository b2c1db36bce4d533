#pragma once

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "stance/corpus.hpp"
#include "stance/error.hpp"

#define CHECK_CODE(expr, code_)                                  \
  do {                                                           \
    bool thrown_ = false;                                        \
    try {                                                        \
      (void)(expr);                                              \
    } catch (const ::stance::Error& e_) {                        \
      thrown_ = true;                                            \
      CHECK_MESSAGE(e_.code() == (code_), e_.what());            \
    }                                                            \
    CHECK_MESSAGE(thrown_, "expected " #code_ " from " #expr);   \
  } while (0)

namespace stance::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("stance_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline StanceExample example(const std::string& id, const std::string& doc_id, const std::string& topic,
                             StanceLabel label, SourceKind kind = SourceKind::Heur,
                             const std::string& document = "") {
  StanceExample ex;
  ex.example_id = id;
  ex.doc_id = doc_id;
  ex.document = document;
  ex.topic_raw = topic;
  ex.topic_tokens = normalize_topic(topic);
  ex.label = label;
  ex.kind = kind;
  return ex;
}

}  // namespace stance::testing
