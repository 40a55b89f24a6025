#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "qbiperm/algebra.hpp"
#include "qbiperm/completion.hpp"
#include "qbiperm/linalg.hpp"
#include "qbiperm/normalform.hpp"
#include "qbiperm/topology.hpp"

namespace qbiperm::io {

/// Keys keep insertion order so output is byte-stable.
using Json = nlohmann::ordered_json;

/// {"rows":n,"cols":m,"data":[[re,im],...]} row-major.
Json to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);

/// {"picture":...,"dom":[...],"cod":[...],"blocks":[[matrix,...],...]},
/// blocks indexed [output][input]. Reading validates the channel.
Json to_json(const Channel& c);
Channel channel_from_json(const Json& j);

/// {"q","p","mbar","sbar","u","picture"}.
Json to_json(const NormalForm& nf);
NormalForm normal_form_from_json(const Json& j);

Json to_json(const ComponentInfo& info);
Json to_json(const ContinuityEntry& entry);
Json to_json(const SelfTestReport& report);

/// Parses text, raising FormatError on malformed JSON.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);
/// Two-space indented, trailing newline.
std::string dump(const Json& j);

}  // namespace qbiperm::io
