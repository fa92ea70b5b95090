#include "ctqw/pdb.hpp"

#include "ctqw/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace ctqw {
namespace {

constexpr std::array<std::string_view, 20> kStandardAminoAcids = {
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
    "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Fixed-column field, 1-based inclusive columns; short lines yield a
// truncated or empty field.
std::string_view column(std::string_view line, std::size_t first, std::size_t last) {
  if (line.size() < first) return {};
  return line.substr(first - 1, std::min(last, line.size()) - first + 1);
}

template <typename T>
std::optional<T> parse_number(std::string_view field) {
  field = trim(field);
  if (field.empty()) return std::nullopt;
  if (field.front() == '+') field.remove_prefix(1);
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

bool starts_with(std::string_view line, std::string_view prefix) {
  return line.substr(0, prefix.size()) == prefix;
}

using ResidueKey = std::tuple<char, int, char>;

}  // namespace

std::string ResidueRecord::label() const {
  std::string out;
  out += chain_id == ' ' ? '_' : chain_id;
  out += ':';
  out += std::to_string(res_seq);
  if (insertion_code) {
    out += ':';
    out += *insertion_code;
  }
  return out;
}

bool ChainSelection::accepts(char chain_id) const {
  return chains.empty() || std::find(chains.begin(), chains.end(), chain_id) != chains.end();
}

std::vector<std::string> StructureModel::labels() const {
  std::vector<std::string> out;
  out.reserve(residues.size());
  for (const auto& r : residues) out.push_back(r.label());
  return out;
}

bool is_standard_amino_acid(std::string_view res_name) noexcept {
  return std::find(kStandardAminoAcids.begin(), kStandardAminoAcids.end(), res_name) !=
         kStandardAminoAcids.end();
}

StructureModel parse_pdb(std::string_view text, const ChainSelection& selection) {
  StructureModel model;
  std::map<ResidueKey, std::size_t> index_of;
  std::size_t candidates = 0;
  bool in_model = false;
  bool seen_model = false;

  std::size_t pos = 0;
  while (pos < text.size()) {
    auto eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;

    if (starts_with(line, "HEADER") && model.pdb_id.empty()) {
      model.pdb_id = std::string(trim(column(line, 63, 66)));
      continue;
    }
    if (starts_with(line, "MODEL ")) {
      if (seen_model) break;
      seen_model = true;
      in_model = true;
      if (auto number = parse_number<int>(column(line, 11, 14))) model.model_number = *number;
      continue;
    }
    if (starts_with(line, "ENDMDL")) {
      if (in_model) break;
      continue;
    }
    if (starts_with(line, "END") && !starts_with(line, "ENDMDL")) break;

    const bool is_atom = starts_with(line, "ATOM  ");
    const bool is_hetatm = starts_with(line, "HETATM");
    if (!is_atom && !is_hetatm) continue;

    if (trim(column(line, 13, 16)) != "CA") continue;
    const std::string res_name(trim(column(line, 18, 20)));
    const bool wanted = (is_atom && is_standard_amino_acid(res_name)) ||
                        (selection.include_mse && res_name == "MSE");
    if (!wanted) continue;
    const std::string_view chain_field = column(line, 22, 22);
    const char chain_id = chain_field.empty() ? ' ' : chain_field.front();
    if (!selection.accepts(chain_id)) continue;

    ++candidates;
    const auto res_seq = parse_number<int>(column(line, 23, 26));
    const auto x = parse_number<double>(column(line, 31, 38));
    const auto y = parse_number<double>(column(line, 39, 46));
    const auto z = parse_number<double>(column(line, 47, 54));
    if (!res_seq || !x || !y || !z || !std::isfinite(*x) || !std::isfinite(*y) ||
        !std::isfinite(*z)) {
      ++model.skipped_records;
      continue;
    }
    double occupancy = 1.0;
    if (!trim(column(line, 55, 60)).empty()) {
      const auto occ = parse_number<double>(column(line, 55, 60));
      if (!occ) {
        ++model.skipped_records;
        continue;
      }
      occupancy = *occ;
    }

    ResidueRecord record;
    record.chain_id = chain_id;
    record.res_seq = *res_seq;
    const std::string_view icode_field = column(line, 27, 27);
    if (!icode_field.empty() && icode_field.front() != ' ') record.insertion_code = icode_field.front();
    record.res_name = res_name;
    record.ca_position = {*x, *y, *z};
    record.occupancy = occupancy;

    const ResidueKey key{chain_id, record.res_seq, record.insertion_code.value_or(' ')};
    const auto [it, inserted] = index_of.emplace(key, model.residues.size());
    if (inserted) {
      model.residues.push_back(std::move(record));
    } else if (record.occupancy > model.residues[it->second].occupancy) {
      model.residues[it->second] = std::move(record);
    }
  }

  if (model.residues.empty()) {
    if (candidates > 0) {
      throw Error(ErrorKind::MalformedRecord,
                  std::to_string(candidates) + " alpha-carbon records matched but none parsed");
    }
    throw Error(ErrorKind::NoAtoms, "no alpha-carbon atoms under the chain selection");
  }
  return model;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace ctqw
