#pragma once

#include <string>
#include <vector>

#include "seb.hpp"

namespace seb::testing {

inline std::string source_path(const std::string& rel) { return std::string(SEB_SOURCE_DIR) + "/" + rel; }

inline Activity load(const std::string& rel) { return parse_activity_file(source_path(rel)); }

/// Activity files of the corpus (single activities, not manifests).
inline std::vector<std::string> corpus_files() {
    return {"corpus/quotecomparer.seb",     "corpus/pingpong.seb",       "corpus/pingpong_service.seb",
            "corpus/pingpong_client.seb",   "corpus/looping_service.seb", "corpus/looping_client.seb",
            "corpus/relay_service.seb",     "corpus/relay_client.seb",    "fixtures/atomic_inv.seb",
            "fixtures/mismatch_client.seb"};
}

}  // namespace seb::testing
