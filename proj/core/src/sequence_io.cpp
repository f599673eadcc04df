#include "qgseg/sequence_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace qgseg {

namespace {

constexpr double kValueMatchTol = 1e-9;

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = s.find(sep, start);
        if (pos == std::string_view::npos) {
            parts.push_back(s.substr(start));
            return parts;
        }
        parts.push_back(s.substr(start, pos - start));
        start = pos + 1;
    }
}

bool parse_double(std::string_view text, double &out) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    auto res = std::from_chars(text.data(), text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::vector<OutcomeAlphabet> parse_program_header(std::string_view value, std::size_t line) {
    std::vector<OutcomeAlphabet> catalog;
    for (std::string_view item : split(value, ';')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        std::size_t colon = item.rfind(':');
        if (colon == std::string_view::npos) {
            throw SequenceFormatError(line, "program entry '" + std::string(item) + "' lacks ':' before its alphabet");
        }
        OutcomeAlphabet alphabet{std::string(trim(item.substr(0, colon))), {}};
        for (std::string_view v : split(item.substr(colon + 1), '|')) {
            double x;
            if (!parse_double(v, x)) {
                throw SequenceFormatError(line, "bad outcome value '" + std::string(v) + "' in program header");
            }
            alphabet.values.push_back(x);
        }
        catalog.push_back(std::move(alphabet));
    }
    return catalog;
}

}  // namespace

SequenceFormatError::SequenceFormatError(std::size_t line, const std::string &what)
    : ValidationError(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {
}

std::string format_shortest(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_sequence(std::ostream &out, const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog) {
    out << "# seed=" << seq.seed << "\n";
    out << "# program=";
    for (std::size_t r = 0; r < catalog.size(); ++r) {
        if (r > 0) {
            out << ';';
        }
        out << catalog[r].label << ':';
        for (std::size_t j = 0; j < catalog[r].values.size(); ++j) {
            if (j > 0) {
                out << '|';
            }
            out << format_shortest(catalog[r].values[j]);
        }
    }
    out << "\n";
    if (!seq.spec_digest.empty()) {
        out << "# digest=" << seq.spec_digest << "\n";
    }
    for (const auto &e : seq.entries) {
        if (e.observable >= catalog.size() || e.outcome >= catalog[e.observable].values.size()) {
            throw ValidationError("sequence entry does not match the catalog it is written with");
        }
        const auto &alphabet = catalog[e.observable];
        out << alphabet.label << ',' << format_shortest(alphabet.values[e.outcome]) << "\n";
    }
}

std::string format_sequence(const OutcomeSequence &seq, std::span<const OutcomeAlphabet> catalog) {
    std::ostringstream out;
    write_sequence(out, seq, catalog);
    return out.str();
}

ParsedSequence read_sequence(std::istream &in, std::span<const OutcomeAlphabet> catalog) {
    ParsedSequence parsed;
    bool have_catalog = !catalog.empty();
    if (have_catalog) {
        parsed.catalog.assign(catalog.begin(), catalog.end());
    }

    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view text = trim(raw);
        if (text.empty()) {
            continue;
        }
        if (text.front() == '#') {
            text = trim(text.substr(1));
            std::size_t eq = text.find('=');
            if (eq == std::string_view::npos) {
                continue;  // free-form comment
            }
            std::string_view key = trim(text.substr(0, eq));
            std::string_view value = trim(text.substr(eq + 1));
            if (key == "seed") {
                auto res = std::from_chars(value.data(), value.data() + value.size(), parsed.sequence.seed);
                if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
                    throw SequenceFormatError(line, "bad seed '" + std::string(value) + "'");
                }
            } else if (key == "program") {
                if (!parsed.sequence.entries.empty()) {
                    throw SequenceFormatError(line, "program header after the first outcome line");
                }
                if (!have_catalog) {
                    parsed.catalog = parse_program_header(value, line);
                }
            } else if (key == "digest") {
                parsed.sequence.spec_digest = std::string(value);
            }
            continue;
        }

        std::size_t comma = text.rfind(',');
        if (comma == std::string_view::npos) {
            throw SequenceFormatError(line, "expected 'observable_label,outcome_value', got '" + std::string(text) + "'");
        }
        std::string_view label = trim(text.substr(0, comma));
        std::string_view value_text = trim(text.substr(comma + 1));
        if (parsed.catalog.empty()) {
            throw SequenceFormatError(line, "no observable catalog: supply one or add a '# program=' header");
        }
        std::size_t r = 0;
        while (r < parsed.catalog.size() && parsed.catalog[r].label != label) {
            ++r;
        }
        if (r == parsed.catalog.size()) {
            throw SequenceFormatError(line, "unknown observable label '" + std::string(label) + "'");
        }
        double value;
        if (!parse_double(value_text, value)) {
            throw SequenceFormatError(line, "bad outcome value '" + std::string(value_text) + "'");
        }
        const auto &values = parsed.catalog[r].values;
        std::size_t j = 0;
        while (j < values.size() && std::abs(values[j] - value) > kValueMatchTol) {
            ++j;
        }
        if (j == values.size()) {
            throw SequenceFormatError(line, "value " + std::string(value_text) + " is not an outcome of observable '" +
                                                std::string(label) + "'");
        }
        parsed.sequence.entries.push_back({static_cast<std::uint32_t>(r), static_cast<std::uint32_t>(j)});
    }
    return parsed;
}

ParsedSequence parse_sequence(const std::string &text, std::span<const OutcomeAlphabet> catalog) {
    std::istringstream in(text);
    return read_sequence(in, catalog);
}

}  // namespace qgseg
