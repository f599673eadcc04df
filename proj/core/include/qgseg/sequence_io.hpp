#pragma once

#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "qgseg/errors.hpp"
#include "qgseg/seqgen.hpp"

namespace qgseg {

/// Malformed sequence file; line() is 1-based (0 when not tied to a line).
class SequenceFormatError : public ValidationError {
   public:
    SequenceFormatError(std::size_t line, const std::string &what);
    std::size_t line() const {
        return line_;
    }

   private:
    std::size_t line_;
};

/// Line-oriented text form of an outcome sequence:
///
///     # seed=42
///     # program=X:-1|1;Y:-1|1;Z:-1|1
///     # digest=0123456789abcdef
///     X,1
///     Y,-1
///
/// Outcome values are written in shortest round-trip decimal form.
void write_sequence(std::ostream &out, const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog);
std::string format_sequence(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog);

struct ParsedSequence {
    OutcomeSequence sequence;
    std::vector<OutcomeAlphabet> catalog;
};

/// Parses the format above. When `catalog` is empty the `# program=` header
/// supplies it; otherwise labels and values are resolved against `catalog`.
ParsedSequence read_sequence(std::istream &in, std::span<const OutcomeAlphabet> catalog = {});
ParsedSequence parse_sequence(const std::string &text, std::span<const OutcomeAlphabet> catalog = {});

/// Shortest decimal text that parses back to exactly `x`.
std::string format_shortest(double x);

}  // namespace qgseg
