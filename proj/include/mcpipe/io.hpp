#pragma once

#include <string>

#include "json.hpp"
#include "mcpipe/estimation.hpp"
#include "mcpipe/signal.hpp"

namespace mcpipe {

using Json = nlohmann::ordered_json;

// CSV format: header "t_s,chi", one sample per row, '.' decimal point.
// Regular signals carry "# dt=<value>" as a leading comment line.
void write_sampled_csv(const std::string& path, const SampledSignal& x);
SampledSignal read_sampled_csv(const std::string& path);

void write_regular_csv(const std::string& path, const RegularSignal& x);
RegularSignal read_regular_csv(const std::string& path);

// True when the file starts with a "# dt=" comment.
bool csv_is_regular(const std::string& path);

// Bits file: a single line of '0'/'1' characters.
void write_bits_file(const std::string& path, const SymbolSequence& a);
SymbolSequence read_bits_file(const std::string& path, int kt = 0);

Json estimate_to_json(const ChannelEstimate& est);
ChannelEstimate estimate_from_json(const Json& j);

void write_json_file(const std::string& path, const Json& j);
Json read_json_file(const std::string& path);

}  // namespace mcpipe
