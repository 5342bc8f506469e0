// Square pictures of a's, at least 2x2: the diagonal is 1, the rest 0.
%format ts
%terminals 'a'
%gamma 0 1
%tiles {
  # # # # # #
  # 1 0 0 0 #
  # 0 1 0 0 #
  # 0 0 1 0 #
  # 0 0 0 1 #
  # # # # # #
}
%project 0 -> 'a'
%project 1 -> 'a'
