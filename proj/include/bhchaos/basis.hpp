#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace bhchaos {

/// Occupation-number label |n_1, ..., n_L> of L >= 2 lattice sites.
class FockState {
 public:
  FockState() = default;
  explicit FockState(std::vector<int> occupations);

  /// Parses "0203003020" (one digit per site) or "10,0,3" (comma separated).
  static FockState parse(std::string_view text);

  int sites() const { return static_cast<int>(occupations_.size()); }
  int particles() const;
  int operator[](std::size_t site) const { return occupations_[site]; }
  std::span<const int> occupations() const { return occupations_; }

  bool is_palindrome() const;

  /// Digits when every occupation is below 10, comma separated otherwise.
  std::string to_string() const;

  auto operator<=>(const FockState&) const = default;

 private:
  std::vector<int> occupations_;
};

/// Mirror image about the lattice center; an involution.
FockState reflect(const FockState& state);

/// binomial(N+L-1, N); throws CapacityError on 64-bit overflow.
std::uint64_t fock_dimension(int particles, int sites);

inline constexpr std::uint64_t kDefaultBasisCap = 50'000'000;

/// All Fock states of N bosons on L sites, in descending lexicographic order
/// (|N,0,...,0> first), with an O(1) state -> index map.
class FockBasis {
 public:
  FockBasis(int particles, int sites, std::uint64_t cap = kDefaultBasisCap);

  int particles() const { return particles_; }
  int sites() const { return sites_; }
  std::size_t size() const { return size_; }

  std::span<const std::uint8_t> occupations(std::size_t index) const {
    return {occupations_.data() + index * sites_, static_cast<std::size_t>(sites_)};
  }
  FockState state(std::size_t index) const;

  /// Position of a state, or -1 when it does not belong to this basis.
  std::int64_t find(std::span<const std::uint8_t> occupations) const;
  std::int64_t find(const FockState& state) const;
  std::size_t index(const FockState& state) const;

  /// Index of the reflected state.
  std::size_t mirror(std::size_t index) const { return mirror_[index]; }

 private:
  using Key = unsigned __int128;
  struct KeyHash {
    std::size_t operator()(Key key) const noexcept;
  };
  Key pack(std::span<const std::uint8_t> occupations) const;

  int particles_;
  int sites_;
  int bits_per_site_;
  std::size_t size_;
  std::vector<std::uint8_t> occupations_;
  std::vector<std::uint32_t> mirror_;
  std::unordered_map<Key, std::uint32_t, KeyHash> index_;
};

std::shared_ptr<const FockBasis> enumerate_basis(int particles, int sites,
                                                 std::uint64_t cap = kDefaultBasisCap);

enum class Parity { even, odd, none };

std::string_view to_string(Parity parity);

/// One basis vector of a sector: either a single Fock label (weight 1) or the
/// (anti)symmetric combination (|first> +- |second>)/sqrt(2) where `first` is
/// the lexicographically smaller of the pair (n, reflect(n)).
struct SectorMember {
  std::uint32_t first;
  std::int32_t second;  // -1 for single-label members

  bool paired() const { return second >= 0; }
};

/// Overlap <member|fock> of a Fock label with the unique member containing it.
struct SectorComponent {
  std::uint32_t member;
  double amplitude;
};

/// Basis of a reflection-parity sector, or of the whole Fock space when the
/// parity is `none`. Holds the underlying FockBasis.
class SectorBasis {
 public:
  SectorBasis(std::shared_ptr<const FockBasis> fock, Parity parity);

  Parity parity() const { return parity_; }
  const FockBasis& fock() const { return *fock_; }
  std::shared_ptr<const FockBasis> fock_handle() const { return fock_; }
  std::size_t size() const { return members_.size(); }

  const SectorMember& member(std::size_t index) const { return members_[index]; }
  std::span<const SectorMember> members() const { return members_; }

  /// Normalization weight: 1 for single labels, 1/sqrt(2) for pairs.
  double weight(std::size_t index) const;

  /// Projection of Fock label `fock_index` onto the sector, if non-zero.
  bool locate(std::size_t fock_index, SectorComponent& out) const;

  /// Member index whose label set contains the given Fock state; throws
  /// ConfigError if the state has no definite image in the sector.
  std::size_t member_of(const FockState& state) const;

 private:
  std::shared_ptr<const FockBasis> fock_;
  Parity parity_;
  std::vector<SectorMember> members_;
  std::vector<std::int32_t> member_of_;
  std::vector<std::int8_t> sign_of_;
};

std::shared_ptr<const SectorBasis> build_parity_basis(std::shared_ptr<const FockBasis> basis,
                                                      Parity sector);
std::shared_ptr<const SectorBasis> full_sector(std::shared_ptr<const FockBasis> basis);

/// Number of reflection-invariant Fock states.
std::size_t count_palindromes(const FockBasis& basis);

}  // namespace bhchaos
