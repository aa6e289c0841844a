#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "tabalign/model.hpp"

namespace tabalign {

inline constexpr const char* kCanonicalSchemaVersion = "1";

// One table per JSON line, stable field order, version tag on every line.
// write_canonical then read_canonical is the identity on valid annotations,
// and rewriting a file produced by write_canonical is byte-identical.
std::string table_to_canonical_line(const TableAnnotation& table);
TableAnnotation table_from_canonical_line(std::string_view line);

void write_canonical(std::ostream& out, std::span<const TableAnnotation> tables);
void write_canonical_file(const std::string& path, std::span<const TableAnnotation> tables);

// Strict readers: throw Error(SchemaVersionMismatch) or
// Error(ValidationFailure) on the first bad record.
std::vector<TableAnnotation> read_canonical(std::istream& in);
std::vector<TableAnnotation> read_canonical_file(const std::string& path);

struct CanonicalReadFailure {
  std::size_t line_number = 0;
  std::string reason;
};

struct CanonicalReadResult {
  std::vector<TableAnnotation> tables;
  std::vector<CanonicalReadFailure> failures;
};

// Per-record tolerant reader used by dataset loading: bad lines are reported,
// good lines are kept.
CanonicalReadResult read_canonical_tolerant(std::istream& in);

}  // namespace tabalign
