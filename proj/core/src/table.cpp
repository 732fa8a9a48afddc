#include "hcr/table.hpp"

#include "hcr/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace hcr {

const std::string&
Table::meta(std::string_view key) const
{
  for (const auto& [k, v] : metadata)
    if (k == key)
      return v;
  throw InvalidInput("table lacks metadata '" + std::string(key) + "'");
}

std::size_t
Table::column(std::string_view name) const
{
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name)
      return i;
  throw InvalidInput("table lacks column '" + std::string(name) + "'");
}

namespace {

void
check_field(const std::string& field)
{
  if (field.find_first_of(",\n\r") != std::string::npos)
    throw InvalidInput("table field '" + field + "' contains a separator");
}

void
append_record(std::string& out, const std::vector<std::string>& fields)
{
  for (std::size_t i = 0; i < fields.size(); ++i) {
    check_field(fields[i]);
    if (i > 0)
      out += ',';
    out += fields[i];
  }
  out += '\n';
}

std::vector<std::string>
split_record(std::string_view line)
{
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(',', start);
    if (end == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      return fields;
    }
    fields.emplace_back(line.substr(start, end - start));
    start = end + 1;
  }
}

} // namespace

std::string
write_table(const Table& table)
{
  std::string out;
  for (const auto& [key, value] : table.metadata) {
    if (key.find('=') != std::string::npos || (key + value).find('\n') != std::string::npos)
      throw InvalidInput("bad metadata entry '" + key + "'");
    out += "# " + key + "=" + value + "\n";
  }
  append_record(out, table.header);
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size())
      throw InvalidInput("table row width does not match header");
    append_record(out, row);
  }
  return out;
}

Table
parse_table(std::string_view text)
{
  Table table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.remove_suffix(1);
    if (!have_header && line.starts_with("# ")) {
      const auto body = line.substr(2);
      const auto eq = body.find('=');
      if (eq == std::string_view::npos)
        throw InvalidInput("metadata line " + std::to_string(line_no) + " lacks '='");
      table.metadata.emplace_back(std::string(body.substr(0, eq)), std::string(body.substr(eq + 1)));
      continue;
    }
    if (line.empty())
      continue;
    if (!have_header) {
      table.header = split_record(line);
      have_header = true;
      continue;
    }
    auto fields = split_record(line);
    if (fields.size() != table.header.size())
      throw InvalidInput("line " + std::to_string(line_no) + " has " +
                         std::to_string(fields.size()) + " fields, header has " +
                         std::to_string(table.header.size()));
    table.rows.push_back(std::move(fields));
  }
  if (!have_header)
    throw InvalidInput("table has no header row");
  return table;
}

std::string
read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw IoError("error reading '" + path.string() + "'");
  return buffer.str();
}

void
write_file(const std::filesystem::path& path, std::string_view contents)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out)
    throw IoError("error writing '" + path.string() + "'");
}

void
save_table(const std::filesystem::path& path, const Table& table)
{
  write_file(path, write_table(table));
}

Table
load_table(const std::filesystem::path& path)
{
  return parse_table(read_file(path));
}

std::string
format_double(double value)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  if (ec != std::errc())
    throw InvalidInput("cannot format number");
  return std::string(buf, ptr);
}

double
parse_double(std::string_view text)
{
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+')
    ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last)
    throw InvalidInput("'" + std::string(text) + "' is not a number");
  return value;
}

long long
parse_integer(std::string_view text)
{
  long long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw InvalidInput("'" + std::string(text) + "' is not an integer");
  return value;
}

} // namespace hcr
