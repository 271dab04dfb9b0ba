#pragma once

// JSON interchange format (version 1) for specifications, realisers,
// certificates and reports. Objects are written with a fixed key order so
// output is byte-stable.
//
//   {
//     "format": 1,
//     "input_alphabet": ["a", "b"],
//     "output_alphabet": ["a", "b"],
//     "parts": [
//       { "name": "D1", "states": ["1", "2"], "initial": "1",
//         "finals": { "2": "" },
//         "transitions": [ { "from": "1", "in": "a", "out": "a", "to": "2" } ] }
//     ]
//   }
//
// Instead of "parts" a file may carry a "transducer" block with the same
// fields except that "initial" is replaced by an "initials" list.

#include "seqsynth/async.hpp"
#include "seqsynth/sync.hpp"
#include "seqsynth/verifier.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace seqsynth {

using Json = nlohmann::ordered_json;

inline constexpr int format_version = 1;

struct SpecFile {
    std::optional<MultiSequentialTransducer> multi;
    std::optional<Transducer> general;

    /// The relation described by the file, as a single transducer.
    const Transducer& relation() const { return multi ? multi->flat() : *general; }
};

/// Parses and validates; every failure is a ParseError whose message names
/// the line it refers to.
SpecFile parse_spec(std::string_view text);
SpecFile load_spec(const std::filesystem::path& path);

Json spec_to_json(const MultiSequentialTransducer& t);
Json spec_to_json(const Transducer& t);
/// Single-part file holding a realiser.
Json realiser_to_json(const SequentialTransducer& r, const std::string& name = "realiser");

/// Two-space indented text with a trailing newline.
std::string dump(const Json& j);

Json to_json(const CriticalCertificate& c, const MultiSequentialTransducer& t);
Json to_json(const CriticalLoop& l, const MultiSequentialTransducer& t);
Json to_json(const WitnessNode& w, const MultiSequentialTransducer& t);
Json to_json(const GameStats& s);
Json to_json(const VerificationReport& r);

/// Inverse of to_json for witnesses (part indices are 1-based in JSON).
WitnessNode witness_from_json(const Json& j, const MultiSequentialTransducer& t);

} // namespace seqsynth
