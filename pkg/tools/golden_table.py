"""The published master-field table for loops with at most three crossings.

Letters name faces by their depth (dual distance to the unbounded face):
s for depth 1, t for 2, u for 3, v for 4; indices separate faces of equal
depth.
"""

ROWS = [
    (0, 1, "e^{-s/2}"),
    (1, 1, "e^{-(s1+s2)/2}"),
    (1, 2, "e^{-s/2-t}(1-t)"),
    (2, 1, "e^{-(s1+s2+s3)/2}"),
    (2, 2, "e^{-s/2-t1-t2}(1-t1)(1-t2)"),
    (2, 3, "e^{-s/2-t1}(1-t1 e^{-t2})"),
    (2, 4, "e^{-(s1+s2)/2-t}(1-t)"),
    (2, 5, "e^{-s/2-t-3u/2}(1-3u+3/2u^2-t(1-u))"),
    (3, 1, "e^{-(s1+s2+s3+s4)/2}"),
    (3, 2, "e^{-s/2-t1-t2-3u/2}(1-3u+3/2u^2-t1(1-u))(1-t2)"),
    (3, 3, "e^{-s/2-t1-u/2}(1-t1 e^{-t2-u}(1-u))"),
    (3, 4, "e^{-(s1+s2)/2-t-3u/2}(1-3u+3/2u^2-t(1-u))"),
    (3, 5, "e^{-s/2-t-3u/2-2v}(1-3u+3/2u^2-t(1-u)-6v+8v^2-8/3v^3+8uv-3/2u^2v-4uv^2-tuv-3/2tv^2+3tv)"),
    (3, 6, "e^{-(s1+s2)/2-t1-t2}(1-t1)(1-t2)"),
    (3, 7, "e^{-s/2-t1}(e^{-t2}+e^{-t3}-(1+t1)e^{-t2-t3})"),
    (3, 8, "e^{-(s1+s2+s3+s4)/2}"),
    (3, 9, "e^{-(s1+s2+s3)/2-t}(1-t)"),
    (3, 10, "e^{-(s1+s2)/2-t1-t2}(1-t1)(1-t2)"),
    (3, 11, "e^{-s/2-t1-t2-t3}(1-t1)(1-t2)(1-t3)"),
    (3, 12, "e^{-(s1+s2)/2-t1}(1-t1e^{-t2})"),
    (3, 13, "e^{-(s1+s2+s3)/2-t}(1-t)"),
    (3, 14, "e^{-s/2-t1-t3}(1-t1e^{-t2})(1-t3)"),
    (3, 15, "e^{-s/2-t1-t3}(1-t1e^{-t2}-t3)"),
    (3, 16, "e^{-s/2-t1-3u/2}(e^{-t2}(1-3u+3/2u^2-(1+t1)(1-u))+1-u)"),
    (3, 17, "e^{-s/2-t-3/2(u1+u2)}(1-3(u1+u2)+3/2(u1+u2)^2-t(1-(u1+u2))+u1u2(2-t-3/2(u1+u2)))"),
    (3, 18, "e^{-s/2-t-3u1/2-u2/2}(e^{-u2}(u1(t+u2-1)+3/2u1^2)+1-t-2u1)"),
    (3, 19, "e^{-(s1+s2+s3)/2-t}(1-t)"),
    (3, 20, "e^{-(s1+s2)/2}(e^{-t1}+e^{-t2}-e^{-t1-t2})"),
]
