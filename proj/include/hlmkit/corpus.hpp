#pragma once

// Corpus JSONL: one {"id": string, "text": string} object per line.

#include <filesystem>
#include <istream>
#include <unordered_set>
#include <vector>

#include "hlmkit/io.hpp"
#include "hlmkit/textstat.hpp"

namespace hlmkit {

inline std::vector<Document> parse_corpus(std::istream& in) {
  std::vector<Document> corpus;
  std::unordered_set<std::string> seen;
  io::for_each_jsonl(in, [&](const json& obj, std::size_t line_no) {
    Document doc{io::require_string(obj, "id", line_no), io::require_string(obj, "text", line_no)};
    try {
      validate(doc);
    } catch (const Error& e) {
      throw e.with_context(io::at_line(line_no));
    }
    if (!seen.insert(doc.id).second) {
      throw Error(ErrorCode::ValidationError,
                  io::at_line(line_no) + ": duplicate document id '" + doc.id + "'");
    }
    corpus.push_back(std::move(doc));
  });
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus contains no documents");
  return corpus;
}

inline std::vector<Document> read_corpus(const std::filesystem::path& path) {
  auto in = io::open_input(path);
  return parse_corpus(in);
}

}  // namespace hlmkit
