0 2
0 3
1 4
1 6
11 12
