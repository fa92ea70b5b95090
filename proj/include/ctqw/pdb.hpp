#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ctqw {

/// One residue reduced to its alpha carbon.
struct ResidueRecord {
  char chain_id = ' ';
  int res_seq = 0;
  std::optional<char> insertion_code;
  std::string res_name;
  Eigen::Vector3d ca_position = Eigen::Vector3d::Zero();
  double occupancy = 1.0;

  /// Node label "chain:res_seq", or "chain:res_seq:icode" when an insertion
  /// code is present. A blank chain identifier is written as '_'.
  std::string label() const;
};

struct ChainSelection {
  /// Empty selects every chain.
  std::vector<char> chains;
  /// Include selenomethionine (MSE) residues, which are usually HETATM.
  bool include_mse = false;

  bool accepts(char chain_id) const;
};

struct StructureModel {
  std::string pdb_id;
  int model_number = 1;
  std::vector<ResidueRecord> residues;
  /// Coordinate records under the selection that could not be parsed.
  std::size_t skipped_records = 0;

  std::vector<std::string> labels() const;
};

bool is_standard_amino_acid(std::string_view res_name) noexcept;

/// Extracts one alpha carbon per residue from the first model of a PDB
/// coordinate file. Alternate locations resolve to the highest occupancy,
/// with the first one seen winning ties. Residues keep file order.
///
/// Throws Error(NoAtoms) when nothing matches the selection and
/// Error(MalformedRecord) when candidate records exist but none parse.
StructureModel parse_pdb(std::string_view text, const ChainSelection& selection = {});

std::string read_text_file(const std::filesystem::path& path);

}  // namespace ctqw
