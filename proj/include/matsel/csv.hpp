#pragma once

#include "matsel/error.hpp"
#include "matsel/record.hpp"
#include "matsel/schema.hpp"
#include "matsel/strings.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace matsel::csv {

/// Splits CSV text into rows of fields. Fields may be double-quoted; inside
/// quotes `""` is a literal quote and commas/newlines are data. Accepts LF
/// and CRLF line endings; a trailing newline does not produce an empty row.
inline std::vector<std::vector<std::string>> parse_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool row_started = false;
  std::size_t line = 1;

  const auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
  };
  const auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty())
          detail::fail("core-model", "BadRow", "line " + std::to_string(line) + ": quote inside unquoted field");
        in_quotes = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        if (row_started || !row.empty()) end_row();  // blank lines are skipped
        ++line;
        break;
      default:
        field += c;
        row_started = true;
    }
  }
  if (in_quotes) detail::fail("core-model", "BadRow", "unterminated quoted field");
  if (row_started || !field.empty()) end_row();
  return rows;
}

inline std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos && field == text::trim(field))
    return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace matsel::csv

namespace matsel {

/// Reads the materials table. Recognised columns: `id` (required), `name`,
/// `class`, every categorical attribute by name and every numeric attribute
/// as `<name>_<unit>`. Empty cells are absent values. Rows are numbered from 1
/// (first data row) in error messages.
inline Dataset parse_materials_csv(std::string_view text, const Schema& schema) {
  const auto rows = csv::parse_rows(text);
  if (rows.empty()) detail::fail("core-model", "MissingColumn", "no header row");

  enum class Kind { id, name, klass, categorical, numeric };
  struct Column {
    Kind kind;
    std::string attr;
  };
  std::vector<Column> columns;
  std::map<std::string, bool> seen;
  for (const auto& raw : rows.front()) {
    const std::string h(text::trim(raw));
    if (seen[h]) detail::fail("core-model", "DuplicateColumn", h);
    seen[h] = true;
    if (h == "id") {
      columns.push_back({Kind::id, {}});
    } else if (h == "name") {
      columns.push_back({Kind::name, {}});
    } else if (h == "class") {
      columns.push_back({Kind::klass, {}});
    } else if (schema.categorical_index(h)) {
      columns.push_back({Kind::categorical, h});
    } else {
      std::optional<std::string> attr;
      for (const auto& n : schema.numeric())
        if (n.column() == h) attr = n.name;
      if (!attr) detail::fail("core-model", "UnknownColumn", h);
      columns.push_back({Kind::numeric, *attr});
    }
  }
  if (!seen["id"]) detail::fail("core-model", "MissingColumn", "id");

  std::vector<MaterialRecord> records;
  records.reserve(rows.size() - 1);
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const std::string row_no = std::to_string(r);
    if (row.size() != columns.size())
      detail::fail("core-model", "BadRow",
                   "row " + row_no + ": expected " + std::to_string(columns.size()) + " fields, got " +
                       std::to_string(row.size()));
    MaterialRecord rec;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const std::string_view cell = text::trim(row[c]);
      const auto& col = columns[c];
      switch (col.kind) {
        case Kind::id:
          rec.id = cell;
          break;
        case Kind::name:
          rec.name = row[c];
          break;
        case Kind::klass:
          if (!cell.empty()) {
            const auto label = schema.canonical_class(cell);
            if (!label)
              detail::fail("core-model", "BadLevel",
                           "row " + row_no + ", attribute class: value \"" + std::string(cell) + "\"");
            rec.class_label = *label;
          }
          break;
        case Kind::categorical:
          if (!cell.empty()) {
            const auto idx = *schema.categorical_index(col.attr);
            const auto level = schema.level_index(idx, cell);
            if (!level)
              detail::fail("core-model", "BadLevel",
                           "row " + row_no + ", attribute " + col.attr + ": value \"" + std::string(cell) + "\"");
            rec.categorical.emplace(col.attr, schema.categorical()[idx].vocabulary[*level]);
          }
          break;
        case Kind::numeric:
          if (!cell.empty()) {
            const auto v = text::parse_double(cell);
            if (!v)
              detail::fail("core-model", "BadNumber",
                           "row " + row_no + ", attribute " + col.attr + ": value \"" + std::string(cell) + "\"");
            rec.numeric.emplace(col.attr, *v);
          }
          break;
      }
    }
    if (rec.id.empty()) detail::fail("core-model", "BadRow", "row " + row_no + ": empty id");
    records.push_back(std::move(rec));
  }
  return Dataset(schema, std::move(records));
}

/// Writes every schema column in canonical order. Numbers use the shortest
/// round-trip form, so parsing the output reproduces the dataset exactly.
inline std::string serialize_materials_csv(const Dataset& data) {
  const auto& schema = data.schema();
  std::string out = "id,name,class";
  for (const auto& a : schema.categorical()) out += "," + csv::quote(a.name);
  for (const auto& a : schema.numeric()) out += "," + csv::quote(a.column());
  out += '\n';
  for (const auto& r : data.records()) {
    out += csv::quote(r.id) + ',' + csv::quote(r.name) + ',' + csv::quote(r.class_label.value_or(""));
    for (const auto& a : schema.categorical()) {
      out += ',';
      if (auto it = r.categorical.find(a.name); it != r.categorical.end()) out += csv::quote(it->second);
    }
    for (const auto& a : schema.numeric()) {
      out += ',';
      if (auto it = r.numeric.find(a.name); it != r.numeric.end()) out += text::format_double(it->second);
    }
    out += '\n';
  }
  return out;
}

/// Identity of a dataset's content, recorded in trained models.
inline std::string dataset_fingerprint(const Dataset& data) {
  return text::fnv1a_hex(data.schema().to_config() + serialize_materials_csv(data));
}

}  // namespace matsel
