namespace dolbeault {
}
