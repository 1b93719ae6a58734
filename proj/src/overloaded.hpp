#ifndef SLC_SRC_OVERLOADED_HPP
#define SLC_SRC_OVERLOADED_HPP

namespace slc::detail {

template <class... Fs>
struct Overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

}  // namespace slc::detail

#endif
