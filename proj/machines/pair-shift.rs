# Moves the second b of each pair before the second a: (abab)* becomes (abba)*.
mode resync
alphabet input a
alphabet output b
states 0 1 2 3
initial 0
final 0
trans 0 a 1 output "a"
trans 1 b 2 output "b"
trans 2 a 3 output "b"
trans 3 b 0 output "a"
