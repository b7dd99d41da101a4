#pragma once

// JSON state and probability files.
//
//   state:          {"rho_re": [[4x4]], "rho_im": [[4x4]]}
//   probabilities:  {"xx": [4], "zz": [4], "yy": [4] (optional), "scrambled": bool}

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scrambled/measurement.h"

namespace scrambled::io {

/// Throws ParseError on malformed JSON or shape, InvalidState naming the
/// violated invariant otherwise.
DensityMatrix parse_state(const std::string &text);
std::string format_state(const DensityMatrix &rho);

struct ProbabilityFile {
    /// Labeled distributions in file order of settings XX, YY, ZZ (present ones).
    std::vector<OutcomeDistribution> distributions;
    /// When true the array order carries no meaning.
    bool scrambled = true;

    ScrambledData data() const;
};

ProbabilityFile parse_probabilities(const std::string &text);
std::string format_probabilities(const ProbabilityFile &file);

/// Kind of a JSON input: a state file or a probability file.
enum class InputKind { State, Probabilities };
InputKind classify_input(const std::string &text);

std::string read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, const std::string &text);

}  // namespace scrambled::io
