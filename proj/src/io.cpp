#include "qk/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace qk {

namespace {

constexpr char kMagic[4] = {'Q', 'K', 'T', 'F'};
constexpr std::size_t kHeaderBytes = 64;
constexpr std::size_t kNameBytes = 32;

int kind_code(TensorKind kind) { return static_cast<int>(kind); }

TensorKind kind_from_code(int code) {
  if (code < 0 || code > 3) throw IoError("tensor file: unknown kind code " + std::to_string(code));
  return static_cast<TensorKind>(code);
}

void put_u32(unsigned char* dst, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) dst[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void put_u64(unsigned char* dst, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) dst[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

void put_f64(unsigned char* dst, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  put_u64(dst, bits);
}

std::uint32_t get_u32(const unsigned char* src) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(src[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(const unsigned char* src) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(src[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* src) {
  const std::uint64_t bits = get_u64(src);
  double v;
  std::memcpy(&v, &bits, sizeof v);
  return v;
}

TensorFile read_binary(std::ifstream& in, const std::string& path) {
  unsigned char head[kHeaderBytes];
  in.read(reinterpret_cast<char*>(head), kHeaderBytes);
  if (in.gcount() != static_cast<std::streamsize>(kHeaderBytes))
    throw IoError("tensor file '" + path + "': truncated header");
  if (std::memcmp(head, kMagic, 4) != 0)
    throw IoError("tensor file '" + path + "': bad magic");
  TensorFile file;
  file.header.format_version = head[4];
  file.header.kind = kind_from_code(head[5]);
  file.header.m = static_cast<int>(get_u32(head + 8));
  file.header.dim = static_cast<Index>(get_u32(head + 12));
  file.header.kappa = get_f64(head + 16);
  const char* name = reinterpret_cast<const char*>(head + 24);
  const std::size_t name_len = ::strnlen(name, kNameBytes);
  file.header.name.assign(name, name_len);
  const std::uint64_t count = get_u64(head + 56);
  if (count > (1ull << 32))
    throw IoError("tensor file '" + path + "': implausible payload count");
  file.payload.resize(count);
  in.read(reinterpret_cast<char*>(file.payload.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (in.gcount() != static_cast<std::streamsize>(count * sizeof(double)))
    throw IoError("tensor file '" + path + "': truncated payload");
  return file;
}

TensorFile read_json(const std::string& text, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("tensor file '" + path + "': JSON parse failure: " + e.what());
  }
  try {
    TensorFile file;
    const nlohmann::json& h = doc.at("header");
    file.header.format_version = h.at("format_version").get<int>();
    file.header.m = h.at("m").get<int>();
    file.header.dim = h.at("dim").get<Index>();
    file.header.kind = kind_from_name(h.at("kind").get<std::string>());
    file.header.convention = h.at("convention").get<std::string>();
    file.header.layout = h.at("layout").get<std::string>();
    file.header.name = h.value("name", std::string());
    file.header.kappa = h.value("kappa", 0.0);
    file.payload = doc.at("payload").get<std::vector<double>>();
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("tensor file '" + path + "': malformed document: " + e.what());
  }
}

} // namespace

std::string kind_name(TensorKind kind) {
  switch (kind) {
    case TensorKind::curvature: return "curvature";
    case TensorKind::structure: return "structure";
    case TensorKind::decomposition: return "decomposition";
    case TensorKind::model: return "model";
  }
  throw IoError("kind_name: invalid kind");
}

TensorKind kind_from_name(const std::string& name) {
  if (name == "curvature") return TensorKind::curvature;
  if (name == "structure") return TensorKind::structure;
  if (name == "decomposition") return TensorKind::decomposition;
  if (name == "model") return TensorKind::model;
  throw IoError("tensor file: unknown kind '" + name + "'");
}

std::size_t expected_payload_length(const TensorFileHeader& header) {
  if (header.m < 1) throw IoError("tensor file: m must be positive");
  if (header.dim != 4 * static_cast<Index>(header.m))
    throw IoError("tensor file: dim must equal 4m");
  const std::size_t d = static_cast<std::size_t>(header.dim);
  const std::size_t d2 = d * d;
  switch (header.kind) {
    case TensorKind::curvature: return d2 * d2;
    case TensorKind::structure: return 3 * d2;
    case TensorKind::decomposition:
    case TensorKind::model: return d2 * d2 + 3 * d2;
  }
  throw IoError("tensor file: invalid kind");
}

void validate(const TensorFile& file) {
  if (file.header.format_version != 1)
    throw IoError("tensor file: unsupported format version " +
                  std::to_string(file.header.format_version));
  if (file.header.layout != "row-major")
    throw IoError("tensor file: unsupported layout '" + file.header.layout + "'");
  const std::size_t want = expected_payload_length(file.header);
  if (file.payload.size() != want) {
    std::ostringstream os;
    os << "tensor file: payload length " << file.payload.size() << " does not match kind '"
       << kind_name(file.header.kind) << "' (expected " << want << ")";
    throw IoError(os.str());
  }
  for (double v : file.payload)
    if (!std::isfinite(v)) throw IoError("tensor file: payload contains a non-finite value");
  if (!std::isfinite(file.header.kappa))
    throw IoError("tensor file: kappa is not finite");
}

void write_tensor_file(const TensorFile& file, const std::string& path, bool binary) {
  validate(file);
  if (binary) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    unsigned char head[kHeaderBytes] = {};
    std::memcpy(head, kMagic, 4);
    head[4] = static_cast<unsigned char>(file.header.format_version);
    head[5] = static_cast<unsigned char>(kind_code(file.header.kind));
    put_u32(head + 8, static_cast<std::uint32_t>(file.header.m));
    put_u32(head + 12, static_cast<std::uint32_t>(file.header.dim));
    put_f64(head + 16, file.header.kappa);
    const std::size_t name_len = std::min(file.header.name.size(), kNameBytes - 1);
    std::memcpy(head + 24, file.header.name.data(), name_len);
    put_u64(head + 56, file.payload.size());
    out.write(reinterpret_cast<const char*>(head), kHeaderBytes);
    out.write(reinterpret_cast<const char*>(file.payload.data()),
              static_cast<std::streamsize>(file.payload.size() * sizeof(double)));
    if (!out) throw IoError("write failure on '" + path + "'");
    return;
  }
  nlohmann::ordered_json doc;
  doc["header"] = {{"format_version", file.header.format_version},
                   {"m", file.header.m},
                   {"dim", file.header.dim},
                   {"kind", kind_name(file.header.kind)},
                   {"convention", file.header.convention},
                   {"layout", file.header.layout},
                   {"name", file.header.name},
                   {"kappa", file.header.kappa}};
  doc["payload"] = file.payload;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << doc.dump() << '\n';
  if (!out) throw IoError("write failure on '" + path + "'");
}

TensorFile read_tensor_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0) {
    in.seekg(0);
    TensorFile file = read_binary(in, path);
    validate(file);
    return file;
  }
  in.clear();
  in.seekg(0);
  std::ostringstream buf;
  buf << in.rdbuf();
  TensorFile file = read_json(buf.str(), path);
  validate(file);
  return file;
}

namespace {

void append_structure(std::vector<double>& payload, const QuaternionicStructure& Q) {
  const Index d = Q.dim();
  for (int a = 0; a < 3; ++a) {
    const Matrix& A = Q.op(a);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) payload.push_back(A(i, j));
  }
}

QuaternionicStructure structure_from_payload(const double* p, int m) {
  const Index d = 4 * static_cast<Index>(m);
  QuaternionicStructure Q;
  Q.m = m;
  Matrix* ops[3] = {&Q.I, &Q.J, &Q.K};
  for (int a = 0; a < 3; ++a) {
    *ops[a] = Matrix(d, d);
    for (Index i = 0; i < d; ++i)
      for (Index j = 0; j < d; ++j) (*ops[a])(i, j) = p[(a * d + i) * d + j];
  }
  const double res = structure_residual(Q);
  if (res > 1e-10)
    throw IoError("tensor file: stored structure violates the quaternion relations (residual " +
                  std::to_string(res) + ")");
  return Q;
}

} // namespace

TensorFile model_to_file(const ModelSpace& model) {
  TensorFile file;
  file.header.kind = TensorKind::model;
  file.header.m = model.m;
  file.header.dim = model.Q.dim();
  file.header.name = model.name;
  file.header.kappa = model.kappa;
  file.payload = model.R.values();
  append_structure(file.payload, model.Q);
  return file;
}

ModelSpace model_from_file(const TensorFile& file) {
  validate(file);
  if (file.header.kind != TensorKind::model)
    throw IoError("tensor file: expected kind 'model', found '" + kind_name(file.header.kind) +
                  "'");
  const Index d = file.header.dim;
  const std::size_t d4 = static_cast<std::size_t>(d) * d * d * d;
  CurvatureTensor R(d, std::vector<double>(file.payload.begin(),
                                           file.payload.begin() + static_cast<long>(d4)));
  QuaternionicStructure Q = structure_from_payload(file.payload.data() + d4, file.header.m);
  if (!(file.header.kappa > 0.0)) throw IoError("tensor file: model kappa must be positive");
  return ModelSpace{file.header.name, file.header.m, std::move(R), std::move(Q),
                    file.header.kappa};
}

TensorFile curvature_to_file(const CurvatureTensor& tensor, int m) {
  if (tensor.dim() != 4 * static_cast<Index>(m))
    throw IoError("curvature_to_file: tensor dimension does not equal 4m");
  TensorFile file;
  file.header.kind = TensorKind::curvature;
  file.header.m = m;
  file.header.dim = tensor.dim();
  file.payload = tensor.values();
  return file;
}

CurvatureTensor curvature_from_file(const TensorFile& file) {
  validate(file);
  if (file.header.kind != TensorKind::curvature)
    throw IoError("tensor file: expected kind 'curvature', found '" +
                  kind_name(file.header.kind) + "'");
  return CurvatureTensor(file.header.dim, file.payload);
}

TensorFile structure_to_file(const QuaternionicStructure& Q) {
  TensorFile file;
  file.header.kind = TensorKind::structure;
  file.header.m = Q.m;
  file.header.dim = Q.dim();
  append_structure(file.payload, Q);
  return file;
}

QuaternionicStructure structure_from_file(const TensorFile& file) {
  validate(file);
  if (file.header.kind != TensorKind::structure)
    throw IoError("tensor file: expected kind 'structure', found '" +
                  kind_name(file.header.kind) + "'");
  return structure_from_payload(file.payload.data(), file.header.m);
}

TensorFile decomposition_to_file(const QKDecomposition& dec, const QuaternionicStructure& Q) {
  if (dec.r1.dim() != Q.dim())
    throw IoError("decomposition_to_file: tensor and structure dimensions differ");
  TensorFile file;
  file.header.kind = TensorKind::decomposition;
  file.header.m = Q.m;
  file.header.dim = Q.dim();
  file.header.kappa = dec.kappa;
  file.payload = dec.r1.values();
  append_structure(file.payload, Q);
  return file;
}

std::pair<QKDecomposition, QuaternionicStructure> decomposition_from_file(const TensorFile& file) {
  validate(file);
  if (file.header.kind != TensorKind::decomposition)
    throw IoError("tensor file: expected kind 'decomposition', found '" +
                  kind_name(file.header.kind) + "'");
  const Index d = file.header.dim;
  const std::size_t d4 = static_cast<std::size_t>(d) * d * d * d;
  CurvatureTensor r1(d, std::vector<double>(file.payload.begin(),
                                            file.payload.begin() + static_cast<long>(d4)));
  QuaternionicStructure Q = structure_from_payload(file.payload.data() + d4, file.header.m);
  return {QKDecomposition{file.header.kappa, std::move(r1)}, std::move(Q)};
}

} // namespace qk
