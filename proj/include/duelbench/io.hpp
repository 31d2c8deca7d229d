#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "duelbench/environment.hpp"
#include "duelbench/preference.hpp"

namespace duelbench {

// Matrix object form: {"k": K, "p": [[...], ...]}.
nlohmann::json matrix_to_json(const PreferenceMatrix& m);
PreferenceMatrix matrix_from_json(const nlohmann::json& j, bool repair = false);

// Sequence file: {"k": K, "cycle": bool, "matrices": [...]}; elements may be
// bare K x K arrays or {"k","p"} objects.
struct MatrixSequence {
    int k = 0;
    bool cycle = false;
    std::vector<PreferenceMatrix> matrices;
};
nlohmann::json sequence_to_json(const MatrixSequence& seq);
MatrixSequence sequence_from_json(const nlohmann::json& j, bool repair = false);
MatrixSequence load_sequence(const std::string& path, bool repair = false);
void save_sequence(const MatrixSequence& seq, const std::string& path);

// Stream replaying a sequence file. Throws ParseError on malformed input,
// ValidationError (carrying the 1-based round index) on an invalid matrix,
// HorizonError when the file is too short and does not cycle.
std::shared_ptr<EnvironmentStream> env_from_file(const std::string& path, std::int64_t horizon,
                                                 bool repair = false);

nlohmann::json read_json_file(const std::string& path);
void write_json_file(const nlohmann::json& j, const std::string& path);

// Doubles formatted with enough digits to round-trip bit-exactly.
std::string format_double(double v);

}  // namespace duelbench
