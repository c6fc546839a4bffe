#pragma once

#include "qk/common.hpp"
#include "qk/models.hpp"
#include "qk/structure.hpp"
#include "qk/tensor.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qk {

// Errors from reading, writing, or validating tensor files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class TensorKind { curvature, structure, decomposition, model };

std::string kind_name(TensorKind kind);
TensorKind kind_from_name(const std::string& name);

struct TensorFileHeader {
  int format_version = 1;
  int m = 0;
  Index dim = 0; // always 4m
  TensorKind kind = TensorKind::curvature;
  std::string convention = "ricci-positive";
  std::string layout = "row-major";
  std::string name;    // model identifier; empty for bare tensors
  double kappa = 0.0;  // meaningful for model and decomposition kinds
};

// Payload layout by kind (all row-major, doubles):
//   curvature:     dim^4 tensor entries
//   structure:     I, J, K as three dim^2 blocks
//   decomposition: dim^4 trace-free part, then I, J, K
//   model:         dim^4 full tensor, then I, J, K
struct TensorFile {
  TensorFileHeader header;
  std::vector<double> payload;
};

// Expected payload length for a header; throws IoError on an invalid header.
std::size_t expected_payload_length(const TensorFileHeader& header);

// Full structural validation (version, dim = 4m, payload length, finiteness).
void validate(const TensorFile& file);

// Writes JSON (text) or the QKTF binary format; validates first.
void write_tensor_file(const TensorFile& file, const std::string& path, bool binary);

// Reads either format, sniffing by magic bytes, and validates.
TensorFile read_tensor_file(const std::string& path);

// Conversions between in-memory objects and files.
TensorFile model_to_file(const ModelSpace& model);
ModelSpace model_from_file(const TensorFile& file);
TensorFile curvature_to_file(const CurvatureTensor& tensor, int m);
CurvatureTensor curvature_from_file(const TensorFile& file);
TensorFile structure_to_file(const QuaternionicStructure& Q);
QuaternionicStructure structure_from_file(const TensorFile& file);
TensorFile decomposition_to_file(const QKDecomposition& dec, const QuaternionicStructure& Q);
// Returns (kappa+r1, structure) reassembled from the payload.
std::pair<QKDecomposition, QuaternionicStructure> decomposition_from_file(const TensorFile& file);

} // namespace qk
