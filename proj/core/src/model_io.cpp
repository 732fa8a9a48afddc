#include "hcr/model_io.hpp"

#include "hcr/error.hpp"
#include "hcr/table.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string_view>

namespace hcr {

namespace {

std::string
shortest(double value)
{
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc())
    throw InvalidInput("cannot format number");
  return std::string(buf, ptr);
}

std::vector<std::string_view>
tokens(std::string_view line)
{
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && line[pos] == ' ')
      ++pos;
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ')
      ++pos;
    if (pos > start)
      out.push_back(line.substr(start, pos - start));
  }
  return out;
}

class LineReader
{
public:
  LineReader(std::istream& in, std::size_t lines_read)
    : in_(in)
    , line_no_(lines_read)
  {}

  std::vector<std::string_view> next(std::string_view expected_key, std::size_t min_tokens)
  {
    if (!std::getline(in_, line_))
      throw InvalidInput("model file ends before '" + std::string(expected_key) + "'");
    ++line_no_;
    if (!line_.empty() && line_.back() == '\r')
      line_.pop_back();
    auto toks = tokens(line_);
    if (!expected_key.empty() && (toks.empty() || toks[0] != expected_key))
      fail("expected '" + std::string(expected_key) + "'");
    if (toks.size() < min_tokens)
      fail("too few fields");
    return toks;
  }

  [[noreturn]] void fail(const std::string& what) const
  {
    throw InvalidInput("model file line " + std::to_string(line_no_) + ": " + what);
  }

  double number(std::string_view text) const
  {
    try {
      return parse_double(text);
    } catch (const InvalidInput&) {
      fail("'" + std::string(text) + "' is not a number");
    }
  }

  long long integer(std::string_view text) const
  {
    try {
      return parse_integer(text);
    } catch (const InvalidInput&) {
      fail("'" + std::string(text) + "' is not an integer");
    }
  }

private:
  std::istream& in_;
  std::string line_;
  std::size_t line_no_ = 0;
};

} // namespace

void
write_model(std::ostream& out, const Model& model)
{
  const ModelConfig& cfg = model.config;
  if (model.normalizers.size() != cfg.variables.size())
    throw InvalidInput("model has " + std::to_string(model.normalizers.size()) +
                       " normalizers for " + std::to_string(cfg.variables.size()) + " variables");
  if (model.coeffs.dim() != cfg.dim() || model.coeffs.degree() != cfg.degree)
    throw InvalidInput("model coefficients do not match its configuration");
  for (const auto& v : cfg.variables)
    if (v.empty() || v.find_first_of(" \t\r\n") != std::string::npos)
      throw InvalidInput("variable name '" + v + "' cannot be stored in a model file");

  std::string text;
  text += kModelFormatTag;
  text += "\nvariables";
  for (const auto& v : cfg.variables)
    text += " " + v;
  text += "\norder " + std::to_string(cfg.order);
  text += "\ndegree " + std::to_string(cfg.degree);
  text += "\nnormalizer " + to_string(cfg.normalizer);
  text += "\nprune_sigmas " + (cfg.prune_sigmas ? shortest(*cfg.prune_sigmas) : "none");
  for (std::size_t i = 0; i < cfg.variables.size(); ++i) {
    const Normalizer& p = model.normalizers[i];
    text += "\nparam " + cfg.variables[i] + " " + to_string(p.kind) + " " + shortest(p.location) +
            " " + shortest(p.scale);
  }
  text += "\ndim " + std::to_string(model.coeffs.dim());
  text += "\nn " + std::to_string(model.coeffs.sample_size());
  text += "\ncoefficients " + std::to_string(model.coeffs.entry_count()) + "\n";
  out << text;

  const std::size_t d = static_cast<std::size_t>(model.coeffs.dim());
  const std::uint64_t base = static_cast<std::uint64_t>(model.coeffs.degree()) + 1;
  std::vector<int> digits(d);
  std::string line;
  for (std::size_t e = 0; e < model.coeffs.entry_count(); ++e) {
    std::uint64_t key = model.coeffs.keys()[e];
    for (std::size_t i = d; i-- > 0;) {
      digits[i] = static_cast<int>(key % base);
      key /= base;
    }
    line.clear();
    for (int v : digits) {
      line += std::to_string(v);
      line += ' ';
    }
    line += shortest(model.coeffs.values()[e]);
    line += '\n';
    out << line;
  }
  if (!out)
    throw IoError("error writing model");
}

Model
read_model(std::istream& in)
{
  {
    std::string first;
    if (!std::getline(in, first))
      throw InvalidInput("empty model file");
    if (!first.empty() && first.back() == '\r')
      first.pop_back();
    if (first != kModelFormatTag)
      throw InvalidInput("not a model file (expected '" + std::string(kModelFormatTag) +
                         "' on the first line)");
  }
  LineReader reader(in, 1);
  Model model;
  ModelConfig& cfg = model.config;

  auto vars = reader.next("variables", 2);
  for (std::size_t i = 1; i < vars.size(); ++i)
    cfg.variables.emplace_back(vars[i]);
  cfg.order = static_cast<int>(reader.integer(reader.next("order", 2)[1]));
  cfg.degree = static_cast<int>(reader.integer(reader.next("degree", 2)[1]));
  cfg.normalizer = parse_distribution(std::string(reader.next("normalizer", 2)[1]));
  const auto prune = reader.next("prune_sigmas", 2)[1];
  if (prune != "none")
    cfg.prune_sigmas = reader.number(prune);

  for (const auto& name : cfg.variables) {
    auto p = reader.next("param", 5);
    if (p[1] != name)
      reader.fail("parameters for '" + std::string(p[1]) + "', expected '" + name + "'");
    Normalizer norm;
    norm.kind = parse_distribution(std::string(p[2]));
    norm.location = reader.number(p[3]);
    norm.scale = reader.number(p[4]);
    if (!(norm.scale > 0.0))
      reader.fail("normalizer scale must be positive");
    model.normalizers.push_back(norm);
  }

  const auto dim = reader.integer(reader.next("dim", 2)[1]);
  if (dim != cfg.dim())
    reader.fail("dimension does not match variables and order");
  const auto n = reader.integer(reader.next("n", 2)[1]);
  const auto count = reader.integer(reader.next("coefficients", 2)[1]);
  cfg.validate(UINT64_MAX);
  const BasisSpec spec = cfg.basis();
  if (n < 0 || count < 0 || static_cast<std::uint64_t>(count) > spec.size())
    reader.fail("bad sample size or coefficient count");

  std::vector<CoefficientTensor::Entry> entries;
  entries.reserve(static_cast<std::size_t>(count));
  const std::uint64_t base = static_cast<std::uint64_t>(cfg.degree) + 1;
  for (long long e = 0; e < count; ++e) {
    auto toks = reader.next("", static_cast<std::size_t>(dim) + 1);
    if (toks.size() != static_cast<std::size_t>(dim) + 1)
      reader.fail("coefficient line needs " + std::to_string(dim) + " indices and a value");
    std::uint64_t key = 0;
    for (long long i = 0; i < dim; ++i) {
      const auto digit = reader.integer(toks[static_cast<std::size_t>(i)]);
      if (digit < 0 || digit > cfg.degree)
        reader.fail("index component outside 0.." + std::to_string(cfg.degree));
      key = key * base + static_cast<std::uint64_t>(digit);
    }
    if (!entries.empty() && key <= entries.back().key)
      reader.fail("coefficients must be in strictly increasing lexicographic order");
    entries.push_back({ key, reader.number(toks.back()) });
  }

  if (entries.size() == spec.size()) {
    std::vector<double> dense;
    dense.reserve(entries.size());
    for (const auto& entry : entries)
      dense.push_back(entry.value);
    model.coeffs = CoefficientTensor(spec, std::move(dense), static_cast<std::size_t>(n));
  } else {
    model.coeffs = CoefficientTensor(spec, std::move(entries), static_cast<std::size_t>(n));
  }
  return model;
}

void
save_model(const std::filesystem::path& path, const Model& model)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw IoError("cannot open '" + path.string() + "' for writing");
  write_model(out, model);
}

Model
load_model(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open '" + path.string() + "' for reading");
  return read_model(in);
}

} // namespace hcr
