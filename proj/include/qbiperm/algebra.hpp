#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "qbiperm/linalg.hpp"

namespace qbiperm {

/// An object of the pure categories (Unitary, Isometry): a dimension.
/// Zero is the initial object.
struct PureObject {
  std::size_t n = 0;
  friend auto operator<=>(const PureObject&, const PureObject&) = default;
};

/// The C*-algebra M_{n_1} (+) ... (+) M_{n_k}, given by its block sizes.
/// The empty list is the initial object N; [1] is the tensor unit I.
class CStarObject {
 public:
  CStarObject() = default;
  explicit CStarObject(std::vector<std::size_t> dims);
  CStarObject(std::initializer_list<std::size_t> dims)
      : CStarObject(std::vector<std::size_t>(dims)) {}

  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t size() const noexcept { return dims_.size(); }
  bool empty() const noexcept { return dims_.empty(); }
  std::size_t operator[](std::size_t i) const { return dims_.at(i); }

  /// Sum of block sizes.
  std::size_t total_dim() const;
  /// Complex dimension of the algebra, sum of squared block sizes.
  std::size_t algebra_dim() const;

  std::string to_string() const;

  friend bool operator==(const CStarObject&, const CStarObject&) = default;

 private:
  std::vector<std::size_t> dims_;
};

/// Concatenation of block lists.
CStarObject oplus(const CStarObject& a, const CStarObject& b);
/// Lexicographic products [a_i * b_k], outer index from the left factor.
CStarObject otimes(const CStarObject& a, const CStarObject& b);
/// The object map of E: n -> [n], with 0 -> [].
CStarObject embed_object(PureObject n);

/// An element of a C*-algebra: one square matrix per block.
using Element = std::vector<Matrix>;

Element zero_element(const CStarObject& obj);
Element unit_element(const CStarObject& obj);
/// Matrix unit E_{ab} placed in block `block`, zero elsewhere.
Element matrix_unit(const CStarObject& obj, std::size_t block, std::size_t a, std::size_t b);

/// A linear map between C*-algebras as a grid of Choi matrices, indexed
/// [output block][input block]. For the component g: M_n -> M_m the Choi matrix
/// is sum_{ab} E_ab (x) g(E_ab), input factor first.
struct ChoiFamily {
  CStarObject dom;
  CStarObject cod;
  std::vector<std::vector<Matrix>> blocks;

  const Matrix& block(std::size_t out, std::size_t in) const { return blocks.at(out).at(in); }
};

/// Throws ShapeError unless every block has shape (n_i m_j) x (n_i m_j).
void check_shape(const ChoiFamily& map);

/// g_{out,in}(E_ab), read directly off the Choi block.
Matrix component_image(const ChoiFamily& map, std::size_t out, std::size_t in, std::size_t a,
                       std::size_t b);

Element apply_map(const ChoiFamily& map, const Element& x);

/// Builds the Choi family of the linear map whose value on the matrix unit
/// E_ab of input block i is `action(i, a, b)`.
ChoiFamily choi_from_action(const CStarObject& dom, const CStarObject& cod,
                            const std::function<Element(std::size_t, std::size_t, std::size_t)>& action);

enum class Picture { schrodinger, heisenberg };

Picture opposite(Picture p);
std::string_view picture_name(Picture p);
Picture parse_picture(std::string_view name);

struct ChannelFlags {
  bool cp = false;
  bool tp = false;
  bool unital = false;
  bool star_hom = false;
};

ChannelFlags classify(const ChoiFamily& map);

/// A validated completely positive map. Schrodinger channels are trace
/// preserving, Heisenberg channels are unital; construction rejects anything
/// else, so every operation downstream may assume validity.
class Channel {
 public:
  static Channel make(ChoiFamily map, Picture picture);

  const ChoiFamily& map() const noexcept { return map_; }
  const CStarObject& dom() const noexcept { return map_.dom; }
  const CStarObject& cod() const noexcept { return map_.cod; }
  Picture picture() const noexcept { return picture_; }
  const Matrix& block(std::size_t out, std::size_t in) const { return map_.block(out, in); }

 private:
  Channel(ChoiFamily map, Picture picture) : map_(std::move(map)), picture_(picture) {}

  ChoiFamily map_;
  Picture picture_;
};

ChannelFlags classify(const Channel& c);
Element apply_map(const Channel& c, const Element& x);

/// Kraus operators in K A K* form, indexed [output block][input block].
/// K has shape m_out x n_in in both pictures.
using KrausGrid = std::vector<std::vector<std::vector<Matrix>>>;

Channel channel_from_kraus(const CStarObject& dom, const CStarObject& cod, const KrausGrid& kraus,
                           Picture picture = Picture::schrodinger);
KrausGrid kraus_from_choi(const Channel& c);

Channel compose(const Channel& g, const Channel& f);
Channel oplus(const Channel& f, const Channel& g);
Channel otimes(const Channel& f, const Channel& g);
/// Trace-pairing dual: Tr(f*(b) a) = Tr(b f(a)). Swaps the picture.
Channel dualize(const Channel& f);

/// E(V) = Ad_V : [m] -> [n] for an isometry V: m -> n.
Channel embed_E(const Matrix& v);
Channel embed_E(const Matrix& v, PureObject dom, PureObject cod);

/// Copairing [f, g] : A (+) B -> C by block juxtaposition.
Channel copair(const Channel& f, const Channel& g);
/// The same copairing computed as (!_{[1,1]} (x) id_C) o (f (+) g), using
/// C (+) C = [1,1] (x) C.
Channel copair_via_terminal(const Channel& f, const Channel& g);

struct ChannelComparison {
  bool equal = false;
  double distance = 0.0;
};

/// Max Frobenius distance between corresponding Choi blocks.
ChannelComparison channel_equal(const Channel& f, const Channel& g, double tol);

/// Structural morphisms at the pure level (matrices).
namespace pure {

Matrix identity(std::size_t n);
/// The unique isometry 0 -> n.
Matrix initial(std::size_t n);
/// gamma_{n,m} : n (+) m -> m (+) n.
Matrix gamma_plus(std::size_t n, std::size_t m);
/// gamma'_{n,m} : n (x) m -> m (x) n.
Matrix gamma_times(std::size_t n, std::size_t m);
/// Left distributor (a (x) b) (+) (a (x) c) -> a (x) (b (+) c), by index law.
Matrix delta(std::size_t a, std::size_t b, std::size_t c);
/// Right distributor (a (x) c) (+) (b (x) c) -> (a (+) b) (x) c, derived from
/// gamma' and the left distributor.
Matrix delta_sharp(std::size_t a, std::size_t b, std::size_t c);
/// The isometry m -> n given by I_m stacked on zeros.
Matrix inclusion(std::size_t m, std::size_t n);

}  // namespace pure

/// Structural morphisms of CPTP (Schrodinger picture).
namespace structural {

Channel identity(const CStarObject& a);
/// Trace: A -> [1].
Channel terminal(const CStarObject& a);
/// The unique map [] -> A.
Channel initial(const CStarObject& a);
/// Inclusion of summands[index] into the concatenation of all summands.
Channel injection(std::span<const CStarObject> summands, std::size_t index);
/// Sum of `arity` copies: A (+) ... (+) A -> A.
Channel fold(const CStarObject& a, std::size_t arity);
/// Block-diagonal extraction [n_1 + ... + n_k] -> [n_1, ..., n_k], built
/// from binary splits with left-associated bracketing.
Channel measure_phi(std::span<const std::size_t> parts);
/// !_n (x) id_m : [n m] -> [m].
Channel partial_trace(std::size_t n, std::size_t m);
Channel gamma_plus(const CStarObject& a, const CStarObject& b);
Channel gamma_times(const CStarObject& a, const CStarObject& b);
Channel delta(const CStarObject& a, const CStarObject& b, const CStarObject& c);
Channel delta_sharp(const CStarObject& a, const CStarObject& b, const CStarObject& c);

}  // namespace structural

/// Names of the canonical morphisms, with their shape parameters.
struct StructuralName {
  enum class Kind {
    identity,
    gamma_plus,
    gamma_times,
    delta,
    delta_sharp,
    terminal,
    initial,
    injection,
    fold,
    partial_trace,
    measure_phi,
  };
  enum class Level { pure, channel };

  Kind kind;
  Level level = Level::channel;
  /// Object parameters in order (pure level: one-element lists).
  std::vector<CStarObject> objects;
  /// Integer parameters: injection index, fold arity, partial trace dims, or
  /// the measurement split.
  std::vector<std::size_t> params;
};

std::variant<Matrix, Channel> structural_morphism(const StructuralName& name);

}  // namespace qbiperm
