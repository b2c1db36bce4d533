// Binary embedding store: "TGAE", u32 version, u32 dim, then the joint,
// sep_docs and sep_topics sections. Each section is a u32 entry count followed
// by entries of a length-prefixed key and token-sequence blocks; a joint entry
// carries two blocks (topic side, then document side). A block is a u32 token
// count, the length-prefixed tokens, then token_count x dim f32 row-major.

#include <cmath>
#include <fstream>

#include "stance/binary_io.hpp"
#include "stance/embed.hpp"
#include "stance/error.hpp"

namespace stance::embed {

namespace {

constexpr char kMagic[4] = {'T', 'G', 'A', 'E'};

void write_block(std::ostream& out, const TokenSequenceEmbedding& seq, std::uint32_t dim) {
  if (seq.vectors.rows() != static_cast<Eigen::Index>(seq.tokens.size()) ||
      (seq.size() > 0 && seq.vectors.cols() != static_cast<Eigen::Index>(dim)))
    throw Error(ErrorCode::DimMismatch, "sequence shape does not match its tokens / store dim");
  io::put_u32(out, static_cast<std::uint32_t>(seq.tokens.size()));
  for (const auto& t : seq.tokens) io::put_string(out, t);
  for (Eigen::Index r = 0; r < seq.vectors.rows(); ++r)
    for (Eigen::Index c = 0; c < seq.vectors.cols(); ++c) io::put_f32(out, seq.vectors(r, c));
}

TokenSequenceEmbedding read_block(io::Reader& in, std::uint32_t dim) {
  TokenSequenceEmbedding seq;
  std::uint32_t count = in.u32();
  for (std::uint32_t i = 0; i < count; ++i) seq.tokens.push_back(in.string());
  seq.vectors.resize(count, dim);
  for (std::uint32_t r = 0; r < count; ++r)
    for (std::uint32_t c = 0; c < dim; ++c) seq.vectors(r, c) = in.f32();
  return seq;
}

void check_block(const TokenSequenceEmbedding& seq, std::size_t cap, const std::string& where,
                 StoreWarnings* warnings) {
  if (!warnings) return;
  if (seq.size() == 0) warnings->messages.push_back(where + ": empty token sequence");
  if (seq.size() > cap)
    warnings->messages.push_back(where + ": " + std::to_string(seq.size()) +
                                 " tokens exceeds cap " + std::to_string(cap));
  if (!seq.vectors.allFinite()) warnings->messages.push_back(where + ": non-finite values");
}

}  // namespace

void write_store(const EmbeddingStore& store, const std::filesystem::path& path) {
  if (store.dim == 0) throw Error(ErrorCode::DimMismatch, "store dim is 0");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out.write(kMagic, 4);
  io::put_u32(out, kStoreVersion);
  io::put_u32(out, store.dim);

  io::put_u32(out, static_cast<std::uint32_t>(store.joint.size()));
  for (const auto& [key, entry] : store.joint) {
    io::put_string(out, key);
    write_block(out, entry.topic, store.dim);
    write_block(out, entry.doc, store.dim);
  }
  for (const auto* section : {&store.sep_docs, &store.sep_topics}) {
    io::put_u32(out, static_cast<std::uint32_t>(section->size()));
    for (const auto& [key, seq] : *section) {
      io::put_string(out, key);
      write_block(out, seq, store.dim);
    }
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path.string());
}

EmbeddingStore read_store(const std::filesystem::path& path, StoreWarnings* warnings) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorCode::Io, "cannot open " + path.string());
  io::Reader in(file, path.string());

  char magic[4] = {};
  in.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic)) throw Error(ErrorCode::BadMagic, path.string());
  std::uint32_t version = in.u32();
  if (version != kStoreVersion)
    throw Error(ErrorCode::VersionMismatch,
                path.string() + ": version " + std::to_string(version) + ", expected " +
                    std::to_string(kStoreVersion));
  EmbeddingStore store;
  store.dim = in.u32();
  if (store.dim == 0) throw Error(ErrorCode::DimMismatch, path.string() + ": dim is 0");

  std::uint32_t n = in.u32();
  for (std::uint32_t i = 0; i < n; ++i) {
    std::string key = in.string();
    JointEntry entry;
    entry.topic = read_block(in, store.dim);
    entry.doc = read_block(in, store.dim);
    check_block(entry.topic, kMaxTopicTokens, "joint[" + key + "].topic", warnings);
    check_block(entry.doc, kMaxDocTokens, "joint[" + key + "].doc", warnings);
    if (!store.joint.emplace(key, std::move(entry)).second && warnings)
      warnings->messages.push_back("joint: duplicate key " + key);
  }
  struct Section {
    std::map<std::string, TokenSequenceEmbedding>* entries;
    std::size_t cap;
    const char* name;
  };
  for (const Section& s : {Section{&store.sep_docs, kMaxDocTokens, "sep_docs"},
                           Section{&store.sep_topics, kMaxTopicTokens, "sep_topics"}}) {
    std::uint32_t count = in.u32();
    for (std::uint32_t i = 0; i < count; ++i) {
      std::string key = in.string();
      TokenSequenceEmbedding seq = read_block(in, store.dim);
      check_block(seq, s.cap, std::string(s.name) + "[" + key + "]", warnings);
      if (!s.entries->emplace(key, std::move(seq)).second && warnings)
        warnings->messages.push_back(std::string(s.name) + ": duplicate key " + key);
    }
  }
  if (!in.at_eof() && warnings) warnings->messages.push_back("trailing bytes after last section");
  return store;
}

}  // namespace stance::embed
