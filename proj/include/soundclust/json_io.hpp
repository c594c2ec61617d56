#pragma once

#include <json.hpp>

#include "soundclust/corpus.hpp"

namespace soundclust {

using json = nlohmann::json;

json document_to_json(const SoundDocument& doc);

// Throws Error(kMalformedJson) on wrong shapes/types and
// Error(kDimensionMismatch) on ragged frame rows.
SoundDocument document_from_json(const json& value);

json corpus_to_json(const Corpus& corpus);
Corpus corpus_from_json(const json& value);

// Parses text, mapping syntax errors to Error(kMalformedJson).
json parse_json_text(std::string_view text);

}  // namespace soundclust
